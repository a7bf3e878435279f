"""Graph encoders mapping circuit DAGs to latent Gaussians (mu, logvar).

Every encoder takes a batch of :class:`DagPlan` and works position by
position along each graph's topological order, so one tensor op covers the
whole batch. All three read the qubit wire label of each edge through a
learned embedding, so the same gate on different qubits encodes differently.
"""
from __future__ import annotations

import torch
from torch import nn

from .config import NODE_TYPE_COUNT, ModelConfig
from .plan import DagPlan


class GatedSum(nn.Module):
    """sum_u sigmoid(gate(x_u)) * map(x_u) over axis -2 of ``x``."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.gate = nn.Linear(in_dim, out_dim)
        self.map = nn.Linear(in_dim, out_dim, bias=False)

    def forward(self, x: torch.Tensor, mask: torch.Tensor | None = None) -> torch.Tensor:
        y = torch.sigmoid(self.gate(x)) * self.map(x)
        if mask is not None:
            y = y * mask.unsqueeze(-1)
        return y.sum(-2)


def _neighbour_batch(steps, i: int):
    """Padded neighbour indices for position ``i`` of every graph.

    Returns ``(types, pos, labels, cats, mask)`` as python lists; rows for
    graphs shorter than ``i + 1`` are padding.
    """
    rows = [s[i] if i < len(s) else (0, ()) for s in steps]
    width = max(len(nb) for _, nb in rows)
    types = [t for t, _ in rows]
    pos = [[nb[j][0] if j < len(nb) else 0 for j in range(width)] for _, nb in rows]
    labels = [[nb[j][1] if j < len(nb) else 0 for j in range(width)] for _, nb in rows]
    cats = [[nb[j][2] if j < len(nb) else 0 for j in range(width)] for _, nb in rows]
    mask = [[1.0 if j < len(nb) else 0.0 for j in range(width)] for _, nb in rows]
    return types, pos, labels, cats, mask, width


class _Encoder(nn.Module):
    readout_dim: int

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.qubit_embed = nn.Embedding(config.max_qubits, config.qubit_embed_dim)
        self.register_buffer("type_eye", torch.eye(NODE_TYPE_COUNT), persistent=False)

    def _heads(self, readout_dim: int):
        self.readout_dim = readout_dim
        self.mu = nn.Linear(readout_dim, self.config.latent_dim)
        self.logvar = nn.Linear(readout_dim, self.config.latent_dim)

    @property
    def dtype(self) -> torch.dtype:
        return self.mu.weight.dtype

    def readout(self, plans: list[DagPlan]) -> torch.Tensor:
        raise NotImplementedError

    def forward(self, plans: list[DagPlan]) -> tuple[torch.Tensor, torch.Tensor]:
        r = self.readout(plans)
        return self.mu(r), self.logvar(r)


class GRUEncoder(_Encoder):
    """Asynchronous message passing: a node's state is a GRU update of its
    type from the gated sum of its (already final) predecessors' states.
    The reverse pass repeats this on the reversed graph with its own
    weights; the readout is [end state, reverse-pass start state]."""

    def __init__(self, config: ModelConfig):
        super().__init__(config)
        H, Q = config.hidden_dim, config.qubit_embed_dim
        self.fwd_cell = nn.GRUCell(NODE_TYPE_COUNT, H)
        self.fwd_agg = GatedSum(H + Q, H)
        if config.bidirectional:
            self.rev_cell = nn.GRUCell(NODE_TYPE_COUNT, H)
            self.rev_agg = GatedSum(H + Q, H)
        self._heads(2 * H if config.bidirectional else H)

    def _propagate(self, steps, cell, agg) -> torch.Tensor:
        B = len(steps)
        H = self.config.hidden_dim
        rows = torch.arange(B).unsqueeze(1)
        states: list[torch.Tensor] = []
        for i in range(max(len(s) for s in steps)):
            types, pos, labels, _, mask, width = _neighbour_batch(steps, i)
            if width == 0:
                h_in = torch.zeros(B, H, dtype=self.dtype)
            else:
                prev = torch.stack(states, 1)[rows, torch.tensor(pos)]
                x = torch.cat([prev, self.qubit_embed(torch.tensor(labels))], -1)
                h_in = agg(x, torch.tensor(mask, dtype=self.dtype))
            states.append(cell(self.type_eye[types], h_in))
        last = torch.tensor([len(s) - 1 for s in steps])
        return torch.stack(states, 1)[torch.arange(B), last]

    def readout(self, plans: list[DagPlan]) -> torch.Tensor:
        fwd = self._propagate([p.forward_steps for p in plans], self.fwd_cell, self.fwd_agg)
        if not self.config.bidirectional:
            return fwd
        rev = self._propagate([p.reverse_steps for p in plans], self.rev_cell, self.rev_agg)
        return torch.cat([fwd, rev], 1)


class GCNEncoder(_Encoder):
    """Simultaneous rounds of mean aggregation over predecessors.

    With ``F(t, a) = tanh(W_t onehot(t) + W_a a + b)`` every node starts at
    ``F(type_v, 0)`` and each application sets
    ``h_v = F(type_v, mean_u W [h_u, q_uv])``. ``gcn_rounds + 1``
    applications are made, so with zero rounds the readout (end node)
    already depends on its predecessors' types.
    """

    def __init__(self, config: ModelConfig):
        super().__init__(config)
        H, Q = config.hidden_dim, config.qubit_embed_dim
        self.type_proj = nn.Linear(NODE_TYPE_COUNT, H)
        self.agg_proj = nn.Linear(H + Q, H, bias=False)
        self._heads(H)

    def readout(self, plans: list[DagPlan]) -> torch.Tensor:
        types, src, dst, labels, ends = [], [], [], [], []
        offset = 0
        for p in plans:
            for i, (t, nb) in enumerate(p.forward_steps):
                types.append(t)
                for j, q, _ in nb:
                    src.append(offset + j)
                    dst.append(offset + i)
                    labels.append(q)
            offset += len(p.forward_steps)
            ends.append(offset - 1)
        base = self.type_proj(self.type_eye[types])
        h = torch.tanh(base)
        dst_idx = torch.tensor(dst, dtype=torch.long)
        deg = torch.zeros(len(types), dtype=self.dtype).index_add(
            0, dst_idx, torch.ones(len(dst), dtype=self.dtype)
        ).clamp(min=1).unsqueeze(1)
        q = self.qubit_embed(torch.tensor(labels, dtype=torch.long))
        src_idx = torch.tensor(src, dtype=torch.long)
        for _ in range(self.config.gcn_rounds + 1):
            msg = self.agg_proj(torch.cat([h[src_idx], q], 1))
            h = torch.tanh(base + torch.zeros_like(h).index_add(0, dst_idx, msg) / deg)
        return h[ends]


class DeepGMGEncoder(_Encoder):
    """Propagation with edge-conditioned messages.

    A message is ``tanh(W [h_src, h_dst, e(ports), q])``; a node's state is a
    GRU update from the summed messages. Each of ``gcn_rounds`` rounds
    sweeps the nodes in topological order, so a node sees its predecessors'
    states from the current round. The readout is the end node.
    """

    def __init__(self, config: ModelConfig):
        super().__init__(config)
        H, Q, E = config.hidden_dim, config.qubit_embed_dim, config.edge_feature_dim
        self.init_proj = nn.Linear(NODE_TYPE_COUNT, H)
        self.edge_embed = nn.Embedding(9, E)
        self.message = nn.Linear(2 * H + E + Q, H)
        self.cell = nn.GRUCell(H, H)
        self._heads(H)

    def readout(self, plans: list[DagPlan]) -> torch.Tensor:
        steps = [p.forward_steps for p in plans]
        B = len(steps)
        L = max(len(s) for s in steps)
        rows = torch.arange(B).unsqueeze(1)
        batches = [_neighbour_batch(steps, i) for i in range(L)]
        states = [torch.tanh(self.init_proj(self.type_eye[b[0]])) for b in batches]
        for _ in range(self.config.gcn_rounds):
            new: list[torch.Tensor] = []
            for i, (_, pos, labels, cats, mask, width) in enumerate(batches):
                if width == 0:
                    new.append(states[i])
                    continue
                m = torch.tensor(mask, dtype=self.dtype)
                prev = torch.stack(new, 1)[rows, torch.tensor(pos)]
                x = torch.cat(
                    [
                        prev,
                        states[i].unsqueeze(1).expand(-1, width, -1),
                        self.edge_embed(torch.tensor(cats)),
                        self.qubit_embed(torch.tensor(labels)),
                    ],
                    -1,
                )
                msg = (torch.tanh(self.message(x)) * m.unsqueeze(-1)).sum(1)
                has = (m.sum(1, keepdim=True) > 0).to(self.dtype)
                new.append(has * self.cell(msg, states[i]) + (1 - has) * states[i])
            states = new
        last = torch.tensor([len(s) - 1 for s in steps])
        return torch.stack(states, 1)[torch.arange(B), last]


ENCODERS = {"gru": GRUEncoder, "gcn": GCNEncoder, "deepgmg": DeepGMGEncoder}
