"""Bulk spectral data for a representation, cached per (rep, depth).

Two tables feed everything downstream:

* class spectra: for each cyclic length n, the Jordan projections of
  the canonical conjugacy-class words together with their periodic-point
  multiplicities (primitive periods).  Conjugacy classes index periodic
  orbits of the symbolic flow, and a class of primitive period p covers
  p periodic sequences, so partition sums weight each class by p.

* element spectra: Cartan projections and lengths of every reduced word
  up to a cap, for the definition-level counting estimators.

Products are evaluated level by level with one batched matrix multiply
per letter (one multiplication per enumerated word in total), along
with the reversed inverse products needed by the split-spectrum rule.
Everything is deterministic: fixed enumeration order, fixed reduction
order, no threading.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import words
from .errors import InvalidParameterError
from .spectra import batched_cartan, batched_jordan

__all__ = ["ClassSpectra", "ElementSpectra", "class_spectra", "element_spectra"]


@dataclass(frozen=True)
class ClassSpectra:
    """Per-level Jordan data over canonical conjugacy classes."""

    n_max: int
    jordan: dict        # n -> (B_n, d) float array
    mult: dict          # n -> (B_n,) int array
    log_mult: dict      # n -> (B_n,) float array

    def all_jordan(self, n_min: int = 1) -> np.ndarray:
        return np.concatenate([self.jordan[n] for n in range(n_min, self.n_max + 1)])

    def lengths(self, n_min: int = 1) -> np.ndarray:
        return np.concatenate(
            [np.full(len(self.jordan[n]), n) for n in range(n_min, self.n_max + 1)]
        )


@dataclass(frozen=True)
class ElementSpectra:
    """Cartan data over all reduced words of length 1..n_max."""

    n_max: int
    cartan: np.ndarray   # (M, d)
    lengths: np.ndarray  # (M,)


@lru_cache(maxsize=512)
def _class_level_spectra(rep, n: int):
    W, mult = words.class_level_arrays(rep.num_generators, n)
    stack = rep.letter_matrices()
    inv_stack = np.ascontiguousarray(stack[_swap_index(rep.num_generators)])
    fwd = stack[W[:, 0]]
    bwd = inv_stack[W[:, -1]]
    for j in range(1, n):
        fwd = fwd @ stack[W[:, j]]
        bwd = bwd @ inv_stack[W[:, -1 - j]]
    lam = batched_jordan(fwd, bwd)
    return lam, mult


def _swap_index(k):
    # letter l -> inverse letter, as an index permutation
    idx = np.arange(2 * k)
    return idx ^ 1


def class_spectra(rep, n_max: int) -> ClassSpectra:
    """Jordan projections and multiplicities for all classes of cyclic
    length 1..n_max."""
    if n_max < 2:
        raise InvalidParameterError("need n_max >= 2")
    jor, mult, logm = {}, {}, {}
    for n in range(1, n_max + 1):
        lam, m = _class_level_spectra(rep, n)
        jor[n], mult[n] = lam, m
        logm[n] = np.log(m.astype(float))
    return ClassSpectra(n_max, jor, mult, logm)


@lru_cache(maxsize=4)
def element_spectra(rep, n_max: int) -> ElementSpectra:
    """Cartan projections of every reduced word of length 1..n_max."""
    if n_max < 1:
        raise InvalidParameterError("need n_max >= 1")
    k = rep.num_generators
    stack = rep.letter_matrices()
    inv_stack = np.ascontiguousarray(stack[_swap_index(k)])
    carts, lens = [], []
    fwd = bwd = None
    for n in range(1, n_max + 1):
        W = words.word_level_array(k, n)
        if n == 1:
            fwd = stack.copy()
            bwd = inv_stack.copy()
        else:
            parents = np.repeat(np.arange(len(words.word_level_array(k, n - 1))), 2 * k - 1)
            last = W[:, -1]
            fwd = fwd[parents] @ stack[last]
            bwd = inv_stack[last] @ bwd[parents]
        carts.append(batched_cartan(fwd, bwd))
        lens.append(np.full(len(W), n, dtype=np.int64))
    return ElementSpectra(n_max, np.concatenate(carts), np.concatenate(lens))
