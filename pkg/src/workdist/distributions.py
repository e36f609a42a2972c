"""Atomic (delta-comb) work distributions with a classical/interference split.

Work values that coincide up to 1e-9*max(1,|W|) are merged: weights are
summed and positions averaged with |weight| weighting.  Degenerate gaps are
common (harmonic ladders), so merging is part of the contract, not a
cosmetic step.
"""

from dataclasses import dataclass

import numpy as np

MERGE_REL_TOL = 1e-9
# atoms lighter than this are rounding noise of zero and are dropped
ATOM_WEIGHT_FLOOR = 1e-14


def merge_atoms(ws, weights):
    """Cluster coincident positions; returns (ws ascending, summed weights)."""
    ws = np.asarray(ws, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if ws.size == 0:
        return ws.copy(), weights.copy()
    order = np.argsort(ws, kind="stable")
    ws, weights = ws[order], weights[order]
    out_w, out_p = [], []
    cur_ws = [ws[0]]
    cur_wt = [weights[0]]
    for w, wt in zip(ws[1:], weights[1:]):
        if w - cur_ws[-1] <= MERGE_REL_TOL * max(1.0, abs(w)):
            cur_ws.append(w)
            cur_wt.append(wt)
        else:
            out_p.append(_merge_position(cur_ws, cur_wt))
            out_w.append(sum(cur_wt))
            cur_ws, cur_wt = [w], [wt]
    out_p.append(_merge_position(cur_ws, cur_wt))
    out_w.append(sum(cur_wt))
    return np.array(out_p), np.array(out_w)


def _merged_nonzero(ws, weights):
    ws, weights = merge_atoms(ws, weights)
    keep = np.abs(weights) > ATOM_WEIGHT_FLOOR
    return ws[keep], weights[keep]


def _merge_position(ws, wts):
    mags = [abs(w) for w in wts]
    tot = sum(mags)
    if tot == 0.0:
        return sum(ws) / len(ws)
    return sum(w * m for w, m in zip(ws, mags)) / tot


@dataclass(frozen=True)
class WorkQuasiDistribution:
    """Signed point masses over work values.

    ``ws``/``weights`` hold the full distribution; the classical part is
    non-negative and the interference part sums to zero.
    """

    ws: np.ndarray
    weights: np.ndarray
    classical_ws: np.ndarray
    classical_weights: np.ndarray
    interference_ws: np.ndarray
    interference_weights: np.ndarray

    @classmethod
    def from_parts(cls, classical_ws, classical_weights,
                   interference_ws=(), interference_weights=()):
        cw, cwt = _merged_nonzero(classical_ws, classical_weights)
        iw, iwt = _merged_nonzero(interference_ws, interference_weights)
        all_w, all_wt = _merged_nonzero(np.concatenate([cw, iw]),
                                        np.concatenate([cwt, iwt]))
        return cls(ws=all_w, weights=all_wt,
                   classical_ws=cw, classical_weights=cwt,
                   interference_ws=iw, interference_weights=iwt)

    @property
    def atoms(self):
        return list(zip(self.ws.tolist(), self.weights.tolist()))

    def total(self):
        return float(np.sum(self.weights))

    def moment(self, order):
        return float(np.sum(self.weights * self.ws ** order))

    def weight_at(self, w, tol=1e-9):
        """Summed weight of atoms within tol of w (0.0 if none)."""
        mask = np.abs(self.ws - w) <= tol
        return float(np.sum(self.weights[mask]))

    def rescaled(self, factor):
        """Same weights with all positions multiplied by factor."""
        return WorkQuasiDistribution(
            ws=self.ws * factor, weights=self.weights.copy(),
            classical_ws=self.classical_ws * factor,
            classical_weights=self.classical_weights.copy(),
            interference_ws=self.interference_ws * factor,
            interference_weights=self.interference_weights.copy())
