"""Exception hierarchy for the msastix toolkit.

Constructors raise; validators report findings instead. Every exception
carries a stable ``code`` token so CLI and server layers can surface
machine-readable failure reasons.
"""


class MsaError(Exception):
    """Base class for all msastix errors."""

    code = "MsaError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# --- model construction -----------------------------------------------------

class EmptyNameError(MsaError):
    code = "EmptyName"


class EmptyTargetError(MsaError):
    code = "EmptyTarget"


class NegativeYoeError(MsaError):
    code = "NegativeYoe"


class NegativeBotNumbersError(MsaError):
    code = "NegativeBotNumbers"


class NegativeCountError(MsaError):
    """A count field other than yoe/bot_numbers is negative."""

    code = "NegativeCount"


class BadMsaClassError(MsaError):
    code = "BadMsaClass"


class BadKillChainStageError(MsaError):
    code = "BadKillChainStage"


class BadTimestampError(MsaError):
    code = "BadTimestamp"


class BadBotRoleError(MsaError):
    code = "BadBotRole"


class ClassProfileMismatchError(MsaError):
    code = "ClassProfileMismatch"


class NoProfileError(MsaError):
    code = "NoProfile"


class EmptyDiamondError(MsaError):
    code = "EmptyDiamond"


class NoRefsError(MsaError):
    code = "NoRefs"


class BadOpinionValueError(MsaError):
    code = "BadOpinionValue"


class BadTechniqueRefError(MsaError):
    code = "BadTechniqueRef"


class DateOrderError(MsaError):
    code = "DateOrder"


# --- vocabulary -------------------------------------------------------------

class UnknownTermError(MsaError):
    """Surface form not present in the vocabulary (any namespace)."""

    code = "UnknownTerm"


class AmbiguousTermError(MsaError):
    """Surface form matches terms in more than one namespace."""

    code = "AmbiguousTerm"

    def __init__(self, message: str = "", candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


# --- codec ------------------------------------------------------------------

class BadTypeTokenError(MsaError):
    code = "BadTypeToken"


class MalformedJsonError(MsaError):
    code = "MalformedJson"


class BadIdGrammarError(MsaError):
    code = "BadIdGrammar"

    def __init__(self, object_id: str):
        super().__init__(f"id does not match the stix-id grammar: {object_id!r}")
        self.object_id = object_id


class ConfidenceOutOfRangeError(MsaError):
    code = "ConfidenceOutOfRange"

    def __init__(self, object_id: str, value):
        super().__init__(f"confidence {value!r} outside 0..100 on {object_id}")
        self.object_id = object_id
        self.value = value


class InvalidObjectError(MsaError):
    code = "InvalidObject"


# --- situation --------------------------------------------------------------

class UnvalidatedBundleError(MsaError):
    code = "UnvalidatedBundle"

    def __init__(self, message: str = "", findings=()):
        super().__init__(message)
        self.findings = tuple(findings)


# --- taxii exchange ---------------------------------------------------------

class UnknownCollectionError(MsaError):
    code = "UnknownCollection"


class WriteForbiddenError(MsaError):
    code = "WriteForbidden"


class ReadForbiddenError(MsaError):
    code = "ReadForbidden"


class BadCursorError(MsaError):
    code = "BadCursor"


class AuthFailedError(MsaError):
    code = "AuthFailed"


class ServerError(MsaError):
    code = "ServerError"

    def __init__(self, status: int, message: str = ""):
        super().__init__(message or f"server returned status {status}")
        self.status = status


class NetworkError(MsaError):
    code = "NetworkError"


class LocalValidationFailedError(MsaError):
    code = "LocalValidationFailed"

    def __init__(self, findings):
        codes = ", ".join(sorted({f.code for f in findings}))
        super().__init__(f"bundle has local validation errors: {codes}")
        self.findings = tuple(findings)
