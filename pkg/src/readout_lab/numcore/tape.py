"""Minimal reverse-mode differentiation over a fixed set of matrix operations."""

import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from readout_lab.errors import ParameterError
from readout_lab.numcore.linalg import cholesky_factor, cholesky_solve


Backward = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


class Var:
    """Handle to one node of a Tape."""

    __slots__ = ("tape", "index")

    def __init__(self, tape: "Tape", index: int):
        self.tape = tape
        self.index = index

    @property
    def value(self) -> np.ndarray:
        return self.tape._values[self.index]

    @property
    def grad(self) -> np.ndarray:
        return self.tape.grad(self)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def __matmul__(self, other: "Var") -> "Var":
        return self.tape.matmul(self, other)

    def __add__(self, other: "Var") -> "Var":
        return self.tape.add(self, other)

    def __mul__(self, other: "Var") -> "Var":
        return self.tape.hadamard(self, other)

    def __repr__(self) -> str:
        return f"Var(index={self.index}, op={self.tape._ops[self.index]}, shape={self.shape})"


class Tape:
    """
    Single-writer record of a forward computation.

    Nodes are appended in topological order; backward() performs one sweep in
    reverse order and accumulates gradients additively into every reachable node.
    """

    def __init__(self):
        self._ops: List[str] = []
        self._parents: List[Tuple[int, ...]] = []
        self._values: List[np.ndarray] = []
        self._backward: List[Optional[Backward]] = []
        self._requires_grad: List[bool] = []
        self._grads: List[Optional[np.ndarray]] = []

    def __len__(self) -> int:
        return len(self._values)

    # ============================================================================
    # Node bookkeeping
    # ============================================================================

    def _push(
        self,
        op: str,
        value: np.ndarray,
        parents: Sequence[Var] = (),
        backward: Optional[Backward] = None,
        requires_grad: Optional[bool] = None,
    ) -> Var:
        for parent in parents:
            if parent.tape is not self:
                raise ParameterError(f"{op}: operand belongs to a different tape")
        if requires_grad is None:
            requires_grad = any(self._requires_grad[p.index] for p in parents)
        self._ops.append(op)
        self._parents.append(tuple(p.index for p in parents))
        self._values.append(value)
        self._backward.append(backward if requires_grad else None)
        self._requires_grad.append(requires_grad)
        self._grads.append(None)
        return Var(self, len(self._values) - 1)

    def param(self, value) -> Var:
        """Leaf that receives a gradient."""
        return self._push("param", np.array(value, dtype=np.float64), requires_grad=True)

    def constant(self, value) -> Var:
        """Leaf that never receives a gradient."""
        return self._push("constant", np.asarray(value, dtype=np.float64), requires_grad=False)

    # ============================================================================
    # Operations
    # ============================================================================

    def matmul(self, a: Var, b: Var, trans_a: bool = False, trans_b: bool = False) -> Var:
        A = a.value.T if trans_a else a.value
        B = b.value.T if trans_b else b.value
        if A.shape[1] != B.shape[0]:
            raise ParameterError(f"matmul: incompatible shapes {A.shape} and {B.shape}")
        Av, Bv = a.value, b.value

        def backward(g: np.ndarray):
            if trans_a and trans_b:
                return Bv.T @ g.T, g.T @ Av.T
            if trans_a:
                return Bv @ g.T, Av @ g
            if trans_b:
                return g @ Bv, g.T @ Av
            return g @ Bv.T, Av.T @ g

        return self._push("matmul", A @ B, (a, b), backward)

    def add(self, a: Var, b: Var) -> Var:
        """Elementwise sum; b may be a 1 x m row broadcast over the rows of a."""
        A, B = a.value, b.value
        row_broadcast = B.shape != A.shape
        if row_broadcast and not (B.shape == (1, A.shape[1])):
            raise ParameterError(f"add: cannot broadcast {B.shape} onto {A.shape}")

        def backward(g: np.ndarray):
            return g, g.sum(axis=0, keepdims=True) if row_broadcast else g

        return self._push("add", A + B, (a, b), backward)

    def scale(self, a: Var, factor: float) -> Var:
        factor = float(factor)
        return self._push("scale", a.value * factor, (a,), lambda g: (g * factor,))

    def append_ones(self, a: Var) -> Var:
        """Append an all-ones bias column: [a | 1]."""
        A = a.value
        out = np.hstack([A, np.ones((A.shape[0], 1))])
        return self._push("append_ones", out, (a,), lambda g: (g[:, :-1],))

    def hadamard(self, a: Var, b: Var) -> Var:
        A, B = a.value, b.value
        if A.shape != B.shape:
            raise ParameterError(f"hadamard: shape mismatch {A.shape} vs {B.shape}")
        return self._push("hadamard", A * B, (a, b), lambda g: (g * B, g * A))

    def relu(self, a: Var) -> Var:
        mask = a.value > 0
        return self._push("relu", np.where(mask, a.value, 0.0), (a,), lambda g: (g * mask,))

    def softmax_cross_entropy(self, logits: Var, targets: np.ndarray, smoothing: float = 0.0) -> Var:
        """
        Mean label-smoothed cross-entropy of row-wise softmax(logits).

        Smoothed targets are (1 - smoothing) * Y + smoothing / C.
        """
        Z = logits.value
        Y = np.asarray(targets, dtype=np.float64)
        if Y.shape != Z.shape:
            raise ParameterError(f"softmax_cross_entropy: targets {Y.shape} vs logits {Z.shape}")
        if not 0.0 <= smoothing < 1.0:
            raise ParameterError(f"smoothing must lie in [0, 1), got {smoothing}")
        n, C = Z.shape
        smoothed = (1.0 - smoothing) * Y + smoothing / C
        shifted = Z - Z.max(axis=1, keepdims=True)
        log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        log_probs = shifted - log_norm
        loss = -float(np.sum(smoothed * log_probs)) / n
        probs = np.exp(log_probs)

        def backward(g: np.ndarray):
            return (float(g.reshape(-1)[0]) * (probs - smoothed) / n,)

        return self._push("softmax_xent", np.array([[loss]]), (logits,), backward)

    def pool_rows(self, a: Var, groups: Sequence[Sequence[int]]) -> Var:
        """Row-mean pooling: output row i is the mean of rows groups[i] of a."""
        A = a.value
        sizes = np.array([len(group) for group in groups])
        if len(groups) == 0 or np.any(sizes == 0):
            raise ParameterError("pool_rows: every group needs at least one row")
        index = np.concatenate([np.asarray(group, dtype=np.int64) for group in groups])
        if index.min() < 0 or index.max() >= A.shape[0]:
            raise ParameterError("pool_rows: row index out of range")
        owner = np.repeat(np.arange(len(groups)), sizes)
        weights = 1.0 / sizes[owner]
        out = np.zeros((len(groups), A.shape[1]))
        np.add.at(out, owner, A[index] * weights[:, None])

        def backward(g: np.ndarray):
            grad = np.zeros_like(A)
            np.add.at(grad, index, g[owner] * weights[:, None])
            return (grad,)

        return self._push("pool_rows", out, (a,), backward)

    def hop_attention(self, query: Var, hops: Sequence[Var]) -> Var:
        """
        Node-adaptive attention over hop representations.

        For node i: score_k = <query_i, hops[k]_i> / sqrt(h), weights = softmax_k(score),
        output_i = sum_k weights_k * hops[k]_i.
        """
        if len(hops) == 0:
            raise ParameterError("hop_attention needs at least one hop")
        q = query.value
        H = np.stack([hop.value for hop in hops], axis=1)
        if H.shape[0] != q.shape[0] or H.shape[2] != q.shape[1]:
            raise ParameterError(f"hop_attention: query {q.shape} vs hops {H.shape}")
        inv_sqrt = 1.0 / math.sqrt(q.shape[1])
        scores = np.einsum("nh,nkh->nk", q, H) * inv_sqrt
        scores -= scores.max(axis=1, keepdims=True)
        weights = np.exp(scores)
        weights /= weights.sum(axis=1, keepdims=True)
        out = np.einsum("nk,nkh->nh", weights, H)

        def backward(g: np.ndarray):
            d_weights = np.einsum("nh,nkh->nk", g, H)
            d_scores = weights * (d_weights - np.sum(weights * d_weights, axis=1, keepdims=True))
            d_query = np.einsum("nk,nkh->nh", d_scores, H) * inv_sqrt
            d_hops = weights[:, :, None] * g[:, None, :] + d_scores[:, :, None] * q[:, None, :] * inv_sqrt
            return (d_query, *[d_hops[:, k, :] for k in range(H.shape[1])])

        return self._push("hop_attention", out, (query, *hops), backward)

    def solve_spd(self, K: Var, B: Var) -> Var:
        """X = K^{-1} B for symmetric positive-definite K; adjoints B' = K^{-T} X', K' = -B' X^T."""
        factor = cholesky_factor(K.value)
        if B.value.shape[0] != factor.shape[0]:
            raise ParameterError(f"solve_spd: B has {B.value.shape[0]} rows, K is {factor.shape}")
        X = cholesky_solve(factor, B.value.copy())

        def backward(g: np.ndarray):
            d_B = cholesky_solve(factor, g.copy())
            return -d_B @ X.T, d_B

        return self._push("solve_spd", X, (K, B), backward)

    # ============================================================================
    # Reverse pass
    # ============================================================================

    def backward(self, root: Var) -> None:
        """Accumulate d(root)/d(node) into every node reachable from a scalar root."""
        if root.value.size != 1:
            raise ParameterError(f"backward needs a scalar root, got shape={root.shape}")
        self._grads = [None] * len(self._values)
        self._grads[root.index] = np.ones_like(root.value)
        for index in range(root.index, -1, -1):
            g = self._grads[index]
            backward = self._backward[index]
            if g is None or backward is None:
                continue
            for parent, parent_grad in zip(self._parents[index], backward(g)):
                if parent_grad is None or not self._requires_grad[parent]:
                    continue
                if self._grads[parent] is None:
                    self._grads[parent] = np.array(parent_grad, dtype=np.float64)
                else:
                    self._grads[parent] = self._grads[parent] + parent_grad

    def grad(self, var: Var) -> np.ndarray:
        """Gradient of the last backward root with respect to var (zeros if unreachable)."""
        g = self._grads[var.index]
        return np.zeros_like(self._values[var.index]) if g is None else g
