"""Sequential decoder that can only emit valid circuit DAGs.

Each qubit owns exactly one dangling output slot at every step (initially
the start node's port for that qubit). A step either picks the end node,
which closes every slot in qubit order, or a gate kind followed by one slot
per input port. Masks keep every choice legal: start is never offered,
two-qubit kinds need two qubits, and end is forced once the gate budget is
spent. A batch of rows decodes in lockstep; finished rows are frozen.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F

from ..dag import END, START, CircuitDag
from ..gates import ALL_KINDS
from .config import END_TYPE, NODE_TYPE_COUNT, NUM_GATE_TYPES, START_TYPE, ModelConfig
from .encoders import GatedSum

ARITY = tuple([k.arity for k in ALL_KINDS] + [0, 0])
_TWO_QUBIT_TYPES = [i for i, a in enumerate(ARITY[:NUM_GATE_TYPES]) if a == 2]


def type_mask(n_qubits: int, budget_left: int | None) -> torch.Tensor:
    """Boolean mask of node types that may be emitted next."""
    allowed = torch.ones(NODE_TYPE_COUNT, dtype=torch.bool)
    allowed[START_TYPE] = False
    if n_qubits < 2:
        allowed[_TWO_QUBIT_TYPES] = False
    if budget_left is not None and budget_left <= 0:
        allowed[:] = False
        allowed[END_TYPE] = True
    return allowed


@dataclass
class DecodeTrace:
    """Choices made while decoding: ``(type index, operand qubits)`` per gate."""

    n_qubits: int
    gates: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def to_dag(self) -> CircuitDag:
        nodes = [START]
        edges = []
        holder = [(0, q) for q in range(self.n_qubits)]
        for t, qubits in self.gates:
            v = len(nodes)
            nodes.append(ALL_KINDS[t])
            for port, q in enumerate(qubits):
                edges.append((*holder[q], v, port))
                holder[q] = (v, port)
        end = len(nodes)
        nodes.append(END)
        for q in range(self.n_qubits):
            edges.append((*holder[q], end, q))
        return CircuitDag(tuple(nodes), tuple(edges))


def _pick(scores: np.ndarray, mode: str, rng, temperature: float) -> int:
    if mode == "greedy":
        return int(np.argmax(scores))
    s = scores / temperature
    finite = np.isfinite(s)
    p = np.zeros_like(s)
    p[finite] = np.exp(s[finite] - s[finite].max())
    p /= p.sum()
    return int(rng.choice(len(p), p=p))


class Decoder(nn.Module):
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        H, Q, D, T = config.hidden_dim, config.qubit_embed_dim, config.latent_dim, NODE_TYPE_COUNT
        # slot features: state, qubit embedding, one-hot of the output port it hangs off
        S = H + Q + 2
        self.init = nn.Linear(D, H)
        self.qubit_embed = nn.Embedding(config.max_qubits, Q)
        self.graph_cell = nn.GRUCell(H, H)
        self.add_node = nn.Sequential(nn.Linear(H, H), nn.ReLU(), nn.Linear(H, T))
        self.node_cell = nn.GRUCell(T, H)
        self.node_agg = GatedSum(S + 2, H)
        self.add_edge = nn.Sequential(nn.Linear(2 * S + H + T + 2, H), nn.ReLU(), nn.Linear(H, 1))
        self.register_buffer("type_eye", torch.eye(T), persistent=False)
        self.register_buffer("port_eye", torch.eye(2), persistent=False)

    def run(
        self,
        z: torch.Tensor,
        n_qubits: int,
        *,
        teacher=None,
        max_gates: int | None = None,
        mode: str = "greedy",
        rng: np.random.Generator | None = None,
        temperature: float | None = None,
    ) -> tuple[torch.Tensor, list[DecodeTrace]]:
        """Decode a batch of latent rows ``z`` (``[B, D]`` or ``[D]``).

        With ``teacher`` (one ``(type, qubits)`` sequence per row) every
        choice is forced and the per-row negative log-likelihood ``[B]`` is
        returned. Otherwise choices are greedy or sampled row by row (in
        row order, from ``rng``) and the returned loss is zero.
        """
        if n_qubits < 1 or n_qubits > self.config.max_qubits:
            raise ValueError(f"n_qubits must be in [1, {self.config.max_qubits}]")
        if mode not in ("greedy", "sample"):
            raise ValueError("mode must be 'greedy' or 'sample'")
        if teacher is None and max_gates is None:
            raise ValueError("free-running decode needs a gate budget")
        if teacher is None and mode == "sample" and rng is None:
            raise ValueError("sampling needs an rng")
        temperature = self.config.temperature if temperature is None else temperature
        z = z.reshape(-1, self.config.latent_dim)
        B, N = z.shape[0], n_qubits
        dtype = z.dtype
        forced = teacher is not None
        if forced and len(teacher) != B:
            raise ValueError("one teacher sequence per latent row required")

        h_z = torch.tanh(self.init(z))
        slots = h_z.unsqueeze(1).expand(B, N, -1)
        g = h_z
        q_emb = self.qubit_embed(torch.arange(N)).unsqueeze(0).expand(B, -1, -1)
        slot_port = z.new_zeros(B, N, 2)
        loss = z.new_zeros(B)
        traces = [DecodeTrace(N) for _ in range(B)]
        running = [True] * B
        rows = torch.arange(B)
        step = 0
        while any(running):
            budget = None if max_gates is None else max_gates - step
            allowed = type_mask(N, budget)
            logits = self.add_node(g).masked_fill(~allowed, float("-inf"))
            if forced:
                types = [
                    (seq[step][0] if step < len(seq) else END_TYPE) if run else END_TYPE
                    for seq, run in zip(teacher, running)
                ]
                logp = F.log_softmax(logits, 1)[rows, types]
                loss = loss - logp * torch.tensor(running, dtype=dtype)
            else:
                scores = logits.detach().double().numpy()
                types = [_pick(scores[b], mode, rng, temperature) if running[b] else END_TYPE for b in range(B)]
            adding = [run and t != END_TYPE for run, t in zip(running, types)]
            running = adding
            if not any(adding):
                break

            add_f = torch.tensor(adding, dtype=dtype)
            feats = torch.cat([slots, q_emb, slot_port], -1)  # [B, N, S]
            onehot = self.type_eye[types]
            arity = [ARITY[t] if a else 0 for t, a in zip(types, adding)]
            chosen = [[] for _ in range(B)]
            prev = feats.new_zeros(B, feats.shape[-1])
            taken = torch.zeros(B, N, dtype=torch.bool)
            port_of = torch.zeros(B, N, 2, dtype=dtype)
            msgs, msg_mask = [], []
            for port in range(max(arity)):
                active = [a > port for a in arity]
                port_vec = self.port_eye[port].expand(B, -1)
                ctx = torch.cat([g, onehot, prev, port_vec], -1)
                scores = self.add_edge(torch.cat([feats, ctx.unsqueeze(1).expand(-1, N, -1)], -1))[..., 0]
                scores = scores.masked_fill(taken, float("-inf"))
                if forced:
                    q = [teacher[b][step][1][port] if active[b] else 0 for b in range(B)]
                    # rows without this port may have every slot masked; keep them finite
                    safe = scores.masked_fill(~torch.tensor(active).unsqueeze(1), 0.0)
                    logp = F.log_softmax(safe, 1)[rows, q]
                    loss = loss - logp * torch.tensor(active, dtype=dtype)
                else:
                    s_np = scores.detach().double().numpy()
                    q = [_pick(s_np[b], mode, rng, temperature) if active[b] else 0 for b in range(B)]
                taken = taken.clone()
                for b in range(B):
                    if active[b]:
                        chosen[b].append(q[b])
                        taken[b, q[b]] = True
                        port_of[b, q[b], port] = 1.0
                prev = feats[rows, q]
                msgs.append(torch.cat([prev, port_vec], -1))
                msg_mask.append(active)
            mask = torch.tensor(msg_mask, dtype=dtype).T  # [B, ports]
            h_v = self.node_cell(onehot, self.node_agg(torch.stack(msgs, 1), mask))
            hit = taken.unsqueeze(-1).to(dtype)
            slots = hit * h_v.unsqueeze(1) + (1 - hit) * slots
            slot_port = port_of + (1 - hit) * slot_port
            g = add_f.unsqueeze(1) * self.graph_cell(h_v, g) + (1 - add_f.unsqueeze(1)) * g
            for b in range(B):
                if adding[b]:
                    traces[b].gates.append((types[b], tuple(chosen[b])))
            step += 1
        return loss, traces
