"""
Exceptions raised by loopforge. Verdicts (a loop that is not Bol, a folder that is not
an A_r-folder) are returned as values, never raised; exceptions mean the input was unusable,
a size cap was hit, or a construction that theory guarantees has failed.
"""

from typing import Dict, Optional


class LoopforgeError(Exception):
    """Base class for all loopforge errors. Carries an optional witness dict"""

    def __init__(self, message: str, witness: Optional[Dict] = None):
        super().__init__(message)
        self.witness = witness or {}


# ~~~ Input errors (CLI exit code 2) ~~~

class InputError(LoopforgeError, ValueError):
    pass

class FormatError(InputError):
    pass

class NotLatin(InputError):
    pass

class NoIdentity(InputError):
    pass

class NotNormal(InputError):
    pass

class NotInH(InputError):
    pass

class NotGenerated(InputError):
    pass

class NotBol(InputError):
    pass

class NoTwoSidedInverse(InputError):
    pass

class NotTransversal(InputError):
    pass

class NotBruckFolder(InputError):
    pass

class NotBX2PFolder(InputError):
    pass

class BadN(InputError):
    pass

class UnsupportedField(InputError):
    pass


# ~~~ Capacity errors (CLI exit code 3) ~~~

class CapacityError(LoopforgeError):
    pass

class CapExceeded(CapacityError):
    pass

class SizeLimit(CapacityError):
    pass


# ~~~ Broken guarantees (CLI exit code 1) ~~~

class NotTwisted(LoopforgeError):
    pass

class NotFound(LoopforgeError):
    pass

class Undecided(LoopforgeError):
    pass
