"""Gray-labeled 16-QAM with minimum-distance demapping.

Symbols are indexed by their 4-bit label: the high two bits select the
in-phase level, the low two the quadrature level, each through a 2-bit
Gray code so that nearest neighbors differ in exactly one bit.  The
constellation is scaled to unit average energy, which puts the four
levels at (+/-1, +/-3)/sqrt(10) and the minimum distance at 2/sqrt(10).
"""

import numpy as np

# Gray labels listed in amplitude order (-3, -1, +1, +3).  The tuple is an
# involution, so it converts labels to level indices as well.
_GRAY_ORDER = (0, 1, 3, 2)

_LEVELS = (2.0 * np.arange(4) - 3.0) / np.sqrt(10.0)


class Qam16Mapper:
    """Bidirectional map between 4-bit labels and complex symbols."""

    order = 16

    def __init__(self):
        labels = np.arange(16)
        to_level = np.array(_GRAY_ORDER)
        self.constellation = (
            _LEVELS[to_level[labels >> 2]] + 1j * _LEVELS[to_level[labels & 3]]
        )
        self.constellation.flags.writeable = False

    def map_indices(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices)
        if indices.size and (indices.min() < 0 or indices.max() >= 16):
            raise ValueError("symbol indices must lie in [0, 16)")
        return self.constellation[indices]

    def demap(self, values: np.ndarray) -> np.ndarray:
        """Minimum-distance decision, exploiting the square grid: each axis
        slices independently onto the nearest of the four levels."""
        values = np.asarray(values)
        half_scale = np.sqrt(10.0) / 2.0
        to_label = np.array(_GRAY_ORDER)
        i_level = np.clip(np.round(values.real * half_scale + 1.5), 0, 3).astype(int)
        q_level = np.clip(np.round(values.imag * half_scale + 1.5), 0, 3).astype(int)
        return (to_label[i_level] << 2) | to_label[q_level]

    def draw(self, rng: np.random.Generator, count: int):
        """Uniform random symbols; returns (indices, complex values)."""
        if count < 1:
            raise ValueError("count must be at least 1")
        indices = rng.integers(0, 16, size=count)
        return indices, self.constellation[indices]
