"""
Reading and writing model, prior and predictive files.

Every loader reports problems as :class:`~lipsolve.exceptions.InflateError` (with the
JSON line when known) or, for models, :class:`~lipsolve.exceptions.ModelValidationFailed`.
"""

import json
import logging

from lipsolve.exceptions import InflateError, ModelValidationFailed
from lipsolve.model import validate_model
from lipsolve.schema import ModelDocument, PredictiveDocument, PriorDocument
from lipsolve.util import atomic_write, dump_json, key_lines

logger = logging.getLogger(__name__)


def read_document(document_class, path):
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InflateError("<json>", document_class, e.msg, e.lineno) from e
    logger.debug("read %s from %s", document_class.__name__, path)
    return document_class.inflate(data, key_lines(text))


def write_document(document, path):
    atomic_write(path, dump_json(document.to_dict()))
    logger.debug("wrote %s to %s", document.__class__.__name__, path)


def load_model(path, validate=True):
    """
    Load a model table.

    :param validate: raise :class:`ModelValidationFailed` listing every violated
                     invariant; pass ``False`` to diagnose a broken table yourself
    """
    m = read_document(ModelDocument, path).to_object()
    if validate:
        report = validate_model(m)
        if not report.is_valid:
            raise ModelValidationFailed(report, source=str(path))
    return m


def save_model(m, path):
    write_document(ModelDocument.from_object(m), path)


def load_prior(path):
    return read_document(PriorDocument, path).to_object()


def save_prior(prior, path, labels=None):
    write_document(PriorDocument.from_object(prior, labels), path)


def load_predictive(path):
    return read_document(PredictiveDocument, path).to_object()


def save_predictive(q, path):
    write_document(PredictiveDocument.from_object(q), path)
