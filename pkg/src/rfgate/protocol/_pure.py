"""Pure-Python codec kernels: CRC-16/CCITT-FALSE and the frame scanner.

Reference implementation for the optional compiled kernel in _native.pyx;
both must stay byte-for-byte interchangeable.  The scanner counts one defect
per discarded byte, which keeps the count associative when a stream is split
across calls at arbitrary boundaries.
"""

_POLY = 0x1021
_SOF0 = 0xAA
_SOF1 = 0x55
_MAX_LENGTH = 65  # length byte counts command + payload (payload <= 64)


def _build_table() -> tuple:
    table = []
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            if crc & 0x8000:
                crc = ((crc << 1) ^ _POLY) & 0xFFFF
            else:
                crc = (crc << 1) & 0xFFFF
        table.append(crc)
    return tuple(table)


_TABLE = _build_table()


def crc16(data: bytes) -> int:
    """CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout."""
    crc = 0xFFFF
    for b in data:
        crc = ((crc << 8) & 0xFFFF) ^ _TABLE[((crc >> 8) ^ b) & 0xFF]
    return crc


def scan_frames(buf: bytes):
    """Scan a buffer for framed messages.

    Returns (frames, defects, consumed) where frames is a list of
    (command_byte, payload_bytes), defects counts discarded bytes, and
    consumed is the offset where an incomplete trailing frame (if any)
    begins.
    """
    frames = []
    defects = 0
    i = 0
    n = len(buf)
    while i < n:
        if buf[i] != _SOF0:
            i += 1
            defects += 1
            continue
        if i + 1 >= n:
            break  # lone SOF byte at the tail: hold for more input
        if buf[i + 1] != _SOF1:
            i += 1
            defects += 1
            continue
        if i + 2 >= n:
            break
        length = buf[i + 2]
        if length < 1 or length > _MAX_LENGTH:
            i += 1
            defects += 1
            continue
        total = length + 5  # SOF(2) + length(1) + cmd+payload(length) + crc(2)
        if i + total > n:
            break  # truncated at the tail: hold for more input
        body_end = i + 3 + length
        given = (buf[body_end] << 8) | buf[body_end + 1]
        if crc16(buf[i + 2 : body_end]) != given:
            i += 1
            defects += 1
            continue
        frames.append((buf[i + 3], bytes(buf[i + 4 : body_end])))
        i += total
    return frames, defects, i
