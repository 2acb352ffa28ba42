"""rfgate: an RFID access-control system with a simulated 125 kHz reader.

Layers, bottom up: coupling (antenna physics from bench measurements), tags
(rewritable tag emulation), protocol (framed byte codec), reader (scan-loop
simulator), events (host-side link monitor), access (Enter/Left state
machine), store (durable tables + append-only event log), reports, and the
service/CLI on top.
"""

__version__ = "0.1.0"
