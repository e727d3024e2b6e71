from __future__ import annotations


class CapExceeded(RuntimeError):
    def __init__(self, what: str, cap: int, partial: int):
        self.what = what
        self.cap = cap
        self.partial = partial
        super().__init__(f"{what} exceeded cap {cap} (reached {partial})")


class IndeterminateVerdict(RuntimeError):
    """A cap or limit stopped an analysis before it could decide."""
