import json
import os
import re
import tempfile

_TOP_LEVEL_KEY = re.compile(r'^\s*"([^"\\]+)"\s*:')


def atomic_write(path, text):
    """
    Write ``text`` to ``path`` via a temporary file in the same directory, so readers
    never observe a partially written file.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lipsolve-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def dump_json(data):
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def key_lines(text):
    """
    First line number (1-based) of each quoted key that starts a line.

    Good enough to point diagnostics at a field of a pretty-printed document.
    """
    lines = {}
    for number, line in enumerate(text.splitlines(), start=1):
        match = _TOP_LEVEL_KEY.match(line)
        if match and match.group(1) not in lines:
            lines[match.group(1)] = number
    return lines


def parse_int_pair(text):
    """``"N,M"`` to ``(N, M)``."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'N,M', got {text!r}")
    return int(parts[0]), int(parts[1])
