"""Small dense 3x3 complex tensor wrapper shared across modules."""

from __future__ import annotations

import numpy as np

__all__ = ["ComplexTensor3"]


class ComplexTensor3:
    """Immutable 3x3 complex tensor with Hermitian decomposition helpers."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=complex)
        if arr.shape != (3, 3):
            raise ValueError("entries must form a 3x3 tensor")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexTensor3 is immutable")

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self.entries.astype(dtype)
        return self.entries

    def __repr__(self):
        return f"ComplexTensor3({self.entries.tolist()!r})"

    def hermitian_part(self) -> "ComplexTensor3":
        return ComplexTensor3(0.5 * (self.entries + self.entries.conj().T))

    def antihermitian_part(self) -> "ComplexTensor3":
        return ComplexTensor3(0.5 * (self.entries - self.entries.conj().T))
