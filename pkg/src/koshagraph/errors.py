"""Exception types shared across the package.

Every error carries a stable ``code`` used by the CLI/HTTP layers to emit
structured error payloads.
"""

from __future__ import annotations


class KoshagraphError(Exception):
    code = "error"

    def payload(self) -> dict:
        return {"type": self.code, "message": str(self)}


class ParseError(KoshagraphError):
    code = "parse_error"

    def __init__(self, message: str, *, source: str | None = None, record: int | None = None):
        super().__init__(message)
        self.source = source
        self.record = record

    def payload(self) -> dict:
        out = super().payload()
        if self.source is not None:
            out["source"] = self.source
        if self.record is not None:
            out["record"] = self.record
        return out


# --- ontology ---------------------------------------------------------------

class DuplicateTypeError(KoshagraphError):
    code = "duplicate_type"


class EmptyOntologyError(KoshagraphError):
    code = "empty_ontology"


class UnknownTypeError(KoshagraphError):
    code = "unknown_type"

    def __init__(self, kind: str, name: str, suggestion: str | None = None):
        msg = f"unknown {kind} type: {name!r}"
        if suggestion:
            msg += f" (did you mean {suggestion!r}?)"
        super().__init__(msg)
        self.kind = kind
        self.name = name
        self.suggestion = suggestion

    def payload(self) -> dict:
        out = super().payload()
        out["name"] = self.name
        out["suggestion"] = self.suggestion
        return out


# --- corpus -----------------------------------------------------------------

class DuplicateLineIdError(KoshagraphError):
    code = "duplicate_line_id"


class InvalidRangeError(KoshagraphError):
    code = "invalid_range"


class NoSuchLineError(KoshagraphError):
    code = "no_such_line"


# --- graph ------------------------------------------------------------------

class NoSuchNodeError(KoshagraphError):
    code = "no_such_node"


class SelfLoopError(KoshagraphError):
    code = "self_loop"


class OntologyMismatchError(KoshagraphError):
    code = "ontology_mismatch"


# --- annotation -------------------------------------------------------------

class DuplicateUnnamedOrdinalError(KoshagraphError):
    code = "duplicate_unnamed_ordinal"


class NoSuchAnnotationError(KoshagraphError):
    code = "no_such_annotation"


class AnnotationPermissionError(KoshagraphError, PermissionError):
    code = "permission_denied"


# --- query language ---------------------------------------------------------

class QuerySyntaxError(KoshagraphError):
    code = "query_syntax_error"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position

    def payload(self) -> dict:
        out = super().payload()
        out["position"] = self.position
        return out


class UnboundVariableError(KoshagraphError):
    code = "unbound_variable"


class HopRangeError(KoshagraphError):
    code = "hop_range_error"


# --- templates --------------------------------------------------------------

class TemplateValidationError(KoshagraphError):
    code = "template_invalid"


class ArityError(KoshagraphError):
    code = "arity_error"


class UnknownEntityError(KoshagraphError):
    code = "unknown_entity"


# --- service ----------------------------------------------------------------

class ConfigError(KoshagraphError):
    code = "config_error"


class BindError(KoshagraphError):
    code = "bind_error"
