"""Stable seed derivation so every sampled quantity is reproducible.

Python's builtin ``hash`` is salted per process, so seeds for split indices
and image ids are derived through sha256 instead.
"""

import hashlib


def derive_seed(*parts) -> int:
    """Collapse ints and strings into a stable 63-bit seed."""
    blob = "\x1f".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.sha256(blob).digest()
    return int.from_bytes(digest[:8], "little") >> 1
