"""Exceptions raised by the ultradisc modules.

Every error carries a stable ``code`` (emitted in reports) and the process
``exit_code`` the CLI maps it to: 1 for bad input, 2 for a falsified theorem
check.
"""

INPUT_ERROR = 1
FALSIFIED = 2


class UltradiscError(Exception):
    code = "error"
    exit_code = INPUT_ERROR

    def to_dict(self):
        return {"code": self.code, "message": str(self)}


class UsageError(UltradiscError):
    code = "usage_error"


class ParseError(UltradiscError):
    """Text did not match the series or map grammar"""
    code = "parse_error"

    def __init__(self, message, column=None, text=None):
        super().__init__(message if column is None else f"{message} (at column {column})")
        self.column = column
        self.text = text

    def to_dict(self):
        data = super().to_dict()
        data["column"] = self.column
        return data


class PrecisionIndeterminate(UltradiscError):
    """A value is zero through its tracked precision, so its valuation is unknown"""
    code = "precision_indeterminate"


class DivisionByZero(UltradiscError):
    code = "division_by_zero"


class NotIntegral(UltradiscError):
    code = "not_integral"


class DegenerateMultiplier(UltradiscError):
    code = "degenerate_multiplier"


class RootOfUnity(UltradiscError):
    code = "root_of_unity"

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class ResonantMultiplier(RootOfUnity):
    code = "resonant_multiplier"


class EmptyMap(UltradiscError):
    code = "empty_map"


class DegenerateInput(UltradiscError):
    code = "degenerate_input"


class InexactInput(UltradiscError):
    code = "inexact_input"


class OutsideDisc(UltradiscError):
    code = "outside_disc"


class WitnessNotFound(UltradiscError):
    code = "witness_not_found"
    exit_code = FALSIFIED


class LemmaViolation(UltradiscError):
    """An exact computation contradicts a proven statement"""
    code = "lemma_violation"
    exit_code = FALSIFIED
