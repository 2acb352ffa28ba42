# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled codec kernels; must match rfgate.protocol._pure byte for byte."""

cdef unsigned short POLY = 0x1021
cdef int SOF0 = 0xAA
cdef int SOF1 = 0x55
cdef int MAX_LENGTH = 65

cdef unsigned short TABLE[256]

cdef void _build_table() noexcept:
    cdef int byte, bit
    cdef unsigned int crc
    for byte in range(256):
        crc = byte << 8
        for bit in range(8):
            if crc & 0x8000:
                crc = ((crc << 1) ^ POLY) & 0xFFFF
            else:
                crc = (crc << 1) & 0xFFFF
        TABLE[byte] = <unsigned short>crc

_build_table()


cdef unsigned short _crc16(const unsigned char* p, Py_ssize_t n) noexcept:
    cdef unsigned short crc = 0xFFFF
    cdef Py_ssize_t i
    for i in range(n):
        crc = ((crc << 8) & 0xFFFF) ^ TABLE[((crc >> 8) ^ p[i]) & 0xFF]
    return crc


def crc16(data: bytes) -> int:
    """CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout."""
    cdef const unsigned char* p = data
    return _crc16(p, len(data))


def scan_frames(buf: bytes):
    """Scan a buffer for framed messages.

    Returns (frames, defects, consumed); same contract as _pure.scan_frames.
    """
    cdef const unsigned char* p = buf
    cdef Py_ssize_t n = len(buf)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t body_end, total
    cdef int length
    cdef unsigned int given
    cdef long defects = 0
    frames = []
    while i < n:
        if p[i] != SOF0:
            i += 1
            defects += 1
            continue
        if i + 1 >= n:
            break
        if p[i + 1] != SOF1:
            i += 1
            defects += 1
            continue
        if i + 2 >= n:
            break
        length = p[i + 2]
        if length < 1 or length > MAX_LENGTH:
            i += 1
            defects += 1
            continue
        total = length + 5
        if i + total > n:
            break
        body_end = i + 3 + length
        given = (<unsigned int>p[body_end] << 8) | p[body_end + 1]
        if _crc16(p + i + 2, length + 1) != given:
            i += 1
            defects += 1
            continue
        frames.append((p[i + 3], buf[i + 4:body_end]))
        i += total
    return frames, defects, i
