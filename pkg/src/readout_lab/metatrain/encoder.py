"""Trainable encoders over frozen hop stacks: residual MLP and hop attention."""

from typing import Dict, NamedTuple, Optional

import numpy as np

from readout_lab.errors import ParameterError
from readout_lab.graphkit import HopStack
from readout_lab.models import EncoderVariant
from readout_lab.numcore import Tape, Var

MLP_LAYERS = 3


class EncoderParams(NamedTuple):
    """Encoder weights by name; biases are stored as 1 x m rows."""
    variant: EncoderVariant
    weights: Dict[str, np.ndarray]
    dropout: float

    @property
    def d_in(self) -> int:
        return int(self.weights["proj_0_W"].shape[0])

    @property
    def d_z(self) -> int:
        return int(self.weights[f"mlp_{MLP_LAYERS}_W"].shape[1])

    @property
    def hops(self) -> int:
        if self.variant == EncoderVariant.MLP:
            return 0
        return sum(1 for name in self.weights if name.startswith("proj_") and name.endswith("_W")) - 1

    def copy(self) -> "EncoderParams":
        return self._replace(weights={name: value.copy() for name, value in self.weights.items()})


def _uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


def init_encoder(
    variant: EncoderVariant,
    d_in: int,
    d_z: int,
    hops: int = 3,
    dropout: float = 0.1,
    seed=0,
) -> EncoderParams:
    """
    Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.

    Both variants share a d_in x d_z input projection per used hop followed by
    a residual 3-layer MLP (MLP_LAYERS maps of d_z x d_z), so the MLP variant
    holds four linear maps: proj_0 and mlp_1..mlp_3. Hop attention projects
    hops 0..hops and adds a d_z x d_z query map applied to the hop-0 projection.
    """
    if d_in < 1 or d_z < 1 or hops < 0:
        raise ParameterError(f"Invalid encoder shape: d_in={d_in}, d_z={d_z}, hops={hops}")
    if not 0.0 <= dropout < 1.0:
        raise ParameterError(f"dropout must lie in [0, 1), got {dropout}")
    variant = EncoderVariant(variant)
    rng = np.random.default_rng(seed)
    weights: Dict[str, np.ndarray] = {}
    n_proj = 1 if variant == EncoderVariant.MLP else hops + 1
    for k in range(n_proj):
        weights[f"proj_{k}_W"] = _uniform(rng, d_in, d_z)
        weights[f"proj_{k}_b"] = np.zeros((1, d_z))
    if variant == EncoderVariant.HOP_ATTENTION:
        weights["query_W"] = _uniform(rng, d_z, d_z)
    for layer in range(1, MLP_LAYERS + 1):
        weights[f"mlp_{layer}_W"] = _uniform(rng, d_z, d_z)
        weights[f"mlp_{layer}_b"] = np.zeros((1, d_z))
    return EncoderParams(variant=variant, weights=weights, dropout=float(dropout))


def bind_params(tape: Tape, params: EncoderParams) -> Dict[str, Var]:
    """Register every weight as a tape parameter."""
    return {name: tape.param(value) for name, value in params.weights.items()}


def _dropout(tape: Tape, x: Var, rate: float, rng: Optional[np.random.Generator]) -> Var:
    if rate == 0.0 or rng is None:
        return x
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return tape.hadamard(x, tape.constant(mask))


def encode(
    tape: Tape,
    params: EncoderParams,
    bound: Dict[str, Var],
    stack: HopStack,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Var:
    """
    Node embeddings (n x d_z) on the tape.

    The input x is the hop-0 projection (MLP variant) or, for hop attention,
    the per-node mix of hop projections scored against a learned map of the
    hop-0 projection. The output is x + MLP(x), a 3-layer ReLU MLP on top of
    the projection. Dropout is only applied when training with an rng.
    """
    if stack.dim != params.d_in:
        raise ParameterError(f"Hop stack width {stack.dim} does not match d_in={params.d_in}")
    if stack.ell < params.hops:
        raise ParameterError(f"Hop stack has {stack.ell} hops, encoder needs {params.hops}")

    def project(k: int) -> Var:
        hop = tape.constant(stack.hops[k])
        return tape.add(tape.matmul(hop, bound[f"proj_{k}_W"]), bound[f"proj_{k}_b"])

    if params.variant == EncoderVariant.MLP:
        x = project(0)
    else:
        projections = [project(k) for k in range(params.hops + 1)]
        query = tape.matmul(projections[0], bound["query_W"])
        x = tape.hop_attention(query, projections)

    rate = params.dropout if training else 0.0
    h = x
    for layer in range(1, MLP_LAYERS + 1):
        h = tape.add(tape.matmul(h, bound[f"mlp_{layer}_W"]), bound[f"mlp_{layer}_b"])
        if layer < MLP_LAYERS:
            h = _dropout(tape, tape.relu(h), rate, rng)
    return tape.add(x, h)


def encode_array(params: EncoderParams, stack: HopStack) -> np.ndarray:
    """Evaluation-mode embeddings as a plain array."""
    tape = Tape()
    bound = {name: tape.constant(value) for name, value in params.weights.items()}
    return encode(tape, params, bound, stack).value.copy()
