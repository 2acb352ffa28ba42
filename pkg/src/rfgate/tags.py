"""Emulated rewritable 125 kHz passive tags.

Tags are immutable values; programming or copying returns a new record.  Only
the T5577-compatible family is writable/readable by the reader; other families
are rejected, mirroring the hardware's behaviour.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .errors import IncompatibleTag, Unprogrammed

UID_MAX = 2**32 - 1  # uid travels as a 4-byte field on the wire


class TagFamily(enum.Enum):
    T5577_COMPATIBLE = "t5577"
    OTHER = "other"


class TagType(enum.Enum):
    STAFF = "staff"
    GUEST = "guest"


@dataclass(frozen=True)
class TagRecord:
    """One emulated tag; tag_type is meaningful only once programmed."""

    uid: int
    family: TagFamily = TagFamily.T5577_COMPATIBLE
    tag_type: TagType | None = None
    programmed: bool = False

    def __post_init__(self):
        if not 0 <= self.uid <= UID_MAX:
            raise ValueError(f"uid {self.uid} outside 32-bit range")


def blank_tag(family: TagFamily = TagFamily.T5577_COMPATIBLE) -> TagRecord:
    """A factory-fresh, unprogrammed tag."""
    return TagRecord(uid=0, family=family)


def program_tag(tag: TagRecord, uid: int, tag_type: TagType) -> TagRecord:
    """Write (uid, tag_type) to a compatible tag; reprogramming is allowed."""
    if tag.family is not TagFamily.T5577_COMPATIBLE:
        raise IncompatibleTag(f"cannot write tag of family {tag.family.value}")
    if not 0 <= uid <= UID_MAX:
        raise ValueError(f"uid {uid} outside 32-bit range")
    return replace(tag, uid=uid, tag_type=tag_type, programmed=True)


def read_uid(tag: TagRecord) -> int:
    """Return the stored uid of a programmed, compatible tag."""
    if tag.family is not TagFamily.T5577_COMPATIBLE:
        raise IncompatibleTag(f"reader rejects tag of family {tag.family.value}")
    if not tag.programmed:
        raise Unprogrammed("tag has not been programmed")
    return tag.uid


def copy_tag(source: TagRecord, blank: TagRecord) -> TagRecord:
    """Duplicate source's uid and type onto another compatible tag."""
    uid = read_uid(source)  # validates source is programmed and compatible
    assert source.tag_type is not None
    return program_tag(blank, uid, source.tag_type)
