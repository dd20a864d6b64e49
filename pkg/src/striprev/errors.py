"""Exception hierarchy shared by every module of the package."""


class StripRevError(Exception):
    """Base class for all errors raised by striprev."""


class UniverseMismatch(StripRevError):
    """Objects built over different fact universes were combined."""


class UnknownFactError(StripRevError):
    def __init__(self, name, context=None):
        self.name = name
        msg = f"unknown fact {name!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class MalformedDomain(StripRevError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"ill-formed domain: {lines}")


class PreconditionViolated(StripRevError):
    def __init__(self, action, missing):
        self.action = action
        self.missing = tuple(missing)
        super().__init__(
            f"action {action!r} not applicable, missing facts: {', '.join(self.missing)}"
        )


class PlanNotApplicable(StripRevError):
    """A step of an action sequence is inapplicable.

    ``index`` is the 0-based position of the first failing step.
    """

    def __init__(self, index, action, missing):
        self.index = index
        self.action = action
        self.missing = tuple(missing)
        super().__init__(
            f"step {index} ({action}) not applicable, missing facts: {', '.join(self.missing)}"
        )


class ParseError(StripRevError):
    def __init__(self, message, line=None, column=None, origin=None):
        self.line = line
        self.column = column
        self.origin = origin
        where = ""
        if line is not None:
            where = f"{origin or '<string>'}:{line}:{column}: "
        super().__init__(where + message)


class UnsupportedFeature(ParseError):
    """Input uses PDDL beyond the propositional STRIPS fragment."""


class EnumerationCapExceeded(StripRevError):
    def __init__(self, cap, size, what="facts"):
        self.cap = cap
        self.size = size
        super().__init__(f"enumeration cap exceeded: {size} {what} > cap {cap}")


class PhiNotSupported(StripRevError):
    pass


class SolverError(StripRevError):
    pass


class SolverNotFound(SolverError):
    pass


class SolverCrashed(SolverError):
    def __init__(self, message, raw=""):
        self.raw = raw
        super().__init__(message)


class SolverOutputError(SolverError):
    def __init__(self, message, raw=""):
        self.raw = raw
        super().__init__(message)


class InconsistentModel(StripRevError):
    pass
