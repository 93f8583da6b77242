"""Exception hierarchy shared by all tropos modules.

Every error raised on a bad input or an exhausted budget derives from
TroposError so the CLI can map it to a single exit code.
"""

from __future__ import annotations


class TroposError(Exception):
    """Base class for all tropos computation errors."""

    code = "Error"

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DuplicateId(TroposError):
    code = "DuplicateId"


class NonPositiveLength(TroposError):
    code = "NonPositiveLength"


class DanglingEndpoint(TroposError):
    code = "DanglingEndpoint"


class DisconnectedInput(TroposError):
    code = "DisconnectedInput"


class NonUniformModel(TroposError):
    code = "NonUniformModel"


class NotEffectiveAway(TroposError):
    code = "NotEffectiveAway"


class NonIntegralSlope(TroposError):
    code = "NonIntegralSlope"


class InvalidFiringDistance(TroposError):
    code = "InvalidFiringDistance"


class NotGeneric(TroposError):
    code = "NotGeneric"


class NotInCanonicalSystem(TroposError):
    code = "NotInCanonicalSystem"


class NotLinearlyEquivalent(TroposError):
    code = "NotLinearlyEquivalent"


class StateCapExceeded(TroposError):
    """The enumeration state budget was exhausted; results would be partial."""

    code = "StateCapExceeded"


class InvalidInput(TroposError):
    code = "InvalidInput"
