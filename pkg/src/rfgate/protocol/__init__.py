"""Reader/host wire protocol: frames, CRC and the stream decoder."""

from .frames import (
    CODE_TO_TAG_TYPE,
    MAX_PAYLOAD,
    SOF,
    TAG_TYPE_TO_CODE,
    Command,
    Frame,
    ack_frame,
    crc16,
    decode_stream,
    encode_frame,
    kernel_name,
    nak_frame,
    parse_set_scan,
    parse_tag_detected,
    parse_write_tag,
    ping_frame,
    reply_subject,
    set_scan_frame,
    tag_detected_frame,
    write_tag_frame,
)

__all__ = [
    "CODE_TO_TAG_TYPE",
    "MAX_PAYLOAD",
    "SOF",
    "TAG_TYPE_TO_CODE",
    "Command",
    "Frame",
    "ack_frame",
    "crc16",
    "decode_stream",
    "encode_frame",
    "kernel_name",
    "nak_frame",
    "parse_set_scan",
    "parse_tag_detected",
    "parse_write_tag",
    "ping_frame",
    "reply_subject",
    "set_scan_frame",
    "tag_detected_frame",
    "write_tag_frame",
]
