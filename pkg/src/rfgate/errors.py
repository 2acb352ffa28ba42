"""Exception types shared across the rfgate package."""


class RfgateError(Exception):
    """Base class for all rfgate domain errors."""


class IncompatibleTag(RfgateError):
    """The tag family is not accepted by the reader/writer."""


class Unprogrammed(RfgateError):
    """Operation requires a programmed tag."""


class PayloadTooLong(RfgateError):
    """Frame payload exceeds the 64-byte limit."""


class NotConnected(RfgateError):
    """Reader link is down; control command refused."""


class LinkDown(RfgateError):
    """Port session cannot ingest while the link is down."""


class WriteInFlight(RfgateError):
    """A tag write is already pending on this session."""


class DuplicateStaffId(RfgateError):
    """A staff/guest record with this id already exists."""


class UnknownStaff(RfgateError):
    """No staff/guest record with this id."""


class TagAlreadyAssigned(RfgateError):
    """The tag uid is already assigned to another person."""


class UnconfiguredReader(RfgateError):
    """Detection came from a reader with no area configured."""


class NotFound(RfgateError):
    """Keyed record lookup failed."""


class SequenceGap(RfgateError):
    """Event seq is not exactly last seq + 1."""


class StoreCorrupt(RfgateError):
    """Persisted data failed integrity checks on load."""


class ConfigInvalid(RfgateError):
    """Service configuration is unusable (e.g. unwritable data dir)."""


class ScriptParseError(RfgateError):
    """Scenario script line could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ScenarioStepError(RfgateError):
    """A scenario step failed during replay."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
