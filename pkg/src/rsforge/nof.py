"""One-sided number-on-the-forehead protocol engine.

Player i sees every argument except x_i. Players 1..k-1 may read the board;
the last player's message depends only on (x_1, ..., x_{k-1}) and is not
charged. Every message is a fixed-width bit string, so the cost of a
protocol is an exact integer.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations, product

from ._cap import guard
from .errors import ContractError, ParameterError
from .functions import FunctionSpec
from .lattice import (
    Coloring,
    IntervalPartition,
    build_interval_partition,
    greedy_coloring,
    point_index,
    sq_dist_coords,
)

PROTOCOLS = ("simple", "interval", "kplayer")


def encode(value: int, alphabet: int) -> str:
    width = (alphabet - 1).bit_length()
    if not 0 <= value < alphabet:
        raise ParameterError(f"symbol {value} outside alphabet of size {alphabet}")
    return format(value, f"0{width}b") if width else ""


def decode(bits: str) -> int:
    return int(bits, 2) if bits else 0


@dataclass(frozen=True)
class Transcript:
    k: int
    messages: tuple[tuple[int, str], ...]

    @property
    def bits(self) -> str:
        return "".join(b for _, b in self.messages)

    def part(self, player: int) -> str:
        return "".join(b for who, b in self.messages if who == player)

    @property
    def last_part(self) -> str:
        return self.part(self.k)

    @property
    def charged(self) -> str:
        """T_1 . T_2 ... T_{k-1}: each player's messages, grouped by player."""
        return "".join(self.part(i) for i in range(1, self.k))

    @property
    def charged_bits(self) -> int:
        return sum(len(b) for who, b in self.messages if who != self.k)


@dataclass(frozen=True)
class ProtocolSpec:
    """One of the three protocols bound to the function it computes.

    ``simple``   -- the last player writes ||x-y||^2, the others check it (k = 3).
    ``interval`` -- the last player writes only the interval of ||x-y||^2, then a
                    color of 2z - y disambiguates (k = 3).
    ``kplayer``  -- reduces g_{k,q,d} to the interval protocol on (x_1, x_2, z')
                    with 2z' = (k-1)x_k - x_3 - ... - x_{k-1}; ``symmetrize`` lets the
                    last player append one bit asserting every pair x_i, x_j lies
                    in the mean's interval.
    """

    name: str
    function: FunctionSpec
    partition: IntervalPartition | None = None
    coloring: Coloring | None = None
    symmetrize: bool = False

    def __post_init__(self):
        f = self.function
        if self.name not in PROTOCOLS:
            raise ParameterError(f"unknown protocol {self.name!r}")
        if self.name in ("simple", "interval"):
            if f.k != 3:
                raise ParameterError(f"the {self.name} protocol is for k = 3")
        elif f.k <= 3 or f.family != "kmidpoint":
            raise ParameterError("the kplayer protocol needs the kmidpoint family with k > 3")
        if self.name != "simple":
            if self.partition is None or self.coloring is None:
                raise ParameterError(f"the {self.name} protocol needs a partition and a coloring")
            if (self.partition.range_max != f.d * f.q**2) or len(self.coloring.colors) != f.n:
                raise ParameterError("partition/coloring do not match the function parameters")
        if self.symmetrize and self.name != "kplayer":
            raise ParameterError("symmetrize applies to the kplayer protocol only")

    @property
    def k(self) -> int:
        return self.function.k

    # message alphabets -------------------------------------------------------------

    @property
    def distance_alphabet(self) -> int:
        f = self.function
        return f.d * (f.q - 1) ** 2 + 1

    @property
    def color_alphabet(self) -> int:
        # one extra symbol: 2z - y outside the cube
        return self.coloring.color_count + 1

    # precomputed decoding tables ------------------------------------------------------

    @cached_property
    def _ball_by_color(self):
        """For each point x: color -> points of the cube in the ball of radius r around x."""
        f = self.function
        pts = f.points
        r_sq = self.partition.length
        table = []
        for x in pts:
            by_color = defaultdict(list)
            for v, p in enumerate(pts):
                if sq_dist_coords(p, x) <= r_sq:
                    by_color[self.coloring.colors[v]].append(v)
            table.append(dict(by_color))
        return tuple(table)

    def mean_transcript(self) -> str:
        """Encoding of I_r(mu) (plus the symmetry bit when enabled)."""
        if self.name == "simple":
            raise ParameterError("the simple protocol has no interval transcript")
        t = encode(self.partition.center_index, self.partition.count)
        return t + "1" if self.symmetrize else t

    # running ------------------------------------------------------------------------

    def run(self, x) -> tuple[Transcript, int]:
        f = self.function
        if len(x) != f.k or any(not 0 <= v < s for v, s in zip(x, f.dims)):
            raise ParameterError(f"input {x} outside the domain {f.dims}")
        if self.name == "simple":
            return self._run_simple(x)
        if self.name == "interval":
            return self._run_interval(x)
        return self._run_kplayer(x)

    def _run_simple(self, x):
        f = self.function
        X, Y = f.points[x[0]], f.points[x[1]]
        Z2 = f.z_points[x[2]]
        board = [(3, encode(sq_dist_coords(X, Y), self.distance_alphabet))]
        value = decode(board[0][1])
        # y-player sees x, z; x-player sees y, z
        b2 = value == sq_dist_coords([2 * c for c in X], Z2)
        board.append((2, str(int(b2))))
        b1 = value == sq_dist_coords([2 * c for c in Y], Z2)
        board.append((1, str(int(b1))))
        return Transcript(3, tuple(board)), int(b1 and b2)

    def _last_message(self, heads) -> str:
        """Message of the last player; a function of x_1..x_{k-1} only."""
        part = self.partition
        msg = encode(part.index(sq_dist_coords(heads[0], heads[1])), part.count)
        if self.symmetrize:
            centre = part.center_index
            ok = all(part.index(sq_dist_coords(a, b)) == centre for a, b in combinations(heads, 2))
            msg += str(int(ok))
        return msg

    def _interval_steps(self, X, Y, Z2, board, last_msg, last, xp, yp):
        """Steps 1-6 of the interval protocol on (X, Y, z) with 2z = Z2.

        ``xp``/``yp`` are the player numbers in the roles of the x- and y-player.
        """
        f = self.function
        part = self.partition
        board.append((last, last_msg))
        shown = decode(board[-1][1][: (part.count - 1).bit_length()])
        b_y = part.index_or_none(sq_dist_coords([2 * c for c in X], Z2)) == shown
        board.append((yp, str(int(b_y))))
        b_x = part.index_or_none(sq_dist_coords([2 * c for c in Y], Z2)) == shown
        board.append((xp, str(int(b_x))))
        if not (b_y and b_x):
            return 0
        # x-player: color of 2z - y, or the sentinel if it leaves the cube
        w = [a - b for a, b in zip(Z2, Y)]
        if all(1 <= c <= f.q for c in w):
            color = self.coloring.colors[point_index(w, f.q)]
        else:
            color = self.coloring.color_count
        board.append((xp, encode(color, self.color_alphabet)))
        # y-player: the unique ball point around x with that color is 2z - y
        shown_color = decode(board[-1][1])
        candidates = self._ball_by_color[point_index(X, f.q)].get(shown_color, ())
        value = 0
        if candidates:
            v = f.points[candidates[0]]
            y_guess = [a - b for a, b in zip(Z2, v)]
            value = int([a + b for a, b in zip(X, y_guess)] == list(Z2))
        board.append((yp, str(value)))
        return value

    def _run_interval(self, x):
        f = self.function
        X, Y = f.points[x[0]], f.points[x[1]]
        board = []
        last_msg = self._last_message((X, Y))
        out = self._interval_steps(X, Y, f.z_points[x[2]], board, last_msg, 3, 1, 2)
        return Transcript(3, tuple(board)), out

    def _run_kplayer(self, x):
        f = self.function
        k = f.k
        heads = [f.points[i] for i in x[:-1]]
        scaled = f.z_points[x[-1]]
        w = list(scaled)
        for p in heads[2:]:
            w = [a - b for a, b in zip(w, p)]
        ok = all(2 <= c <= 2 * f.q for c in w)
        board = [(1, str(int(ok)))]
        last_msg = self._last_message(heads)
        if not ok:
            # the last player writes regardless of the board
            board.append((k, last_msg))
            return Transcript(k, tuple(board)), 0
        out = self._interval_steps(heads[0], heads[1], w, board, last_msg, k, 1, 2)
        return Transcript(k, tuple(board)), out


def simple_protocol(f: FunctionSpec) -> ProtocolSpec:
    return ProtocolSpec("simple", f)


def _interval_parts(f, r_sq, threshold, coloring, cap):
    r_sq = f.d if r_sq is None else r_sq
    part = build_interval_partition(f.q, f.d, r_sq=r_sq)
    if coloring is None:
        # a ball of radius r has diameter 2r: squared distances up to 4 r^2
        coloring = greedy_coloring(f.q, f.d, 4 * r_sq if threshold is None else threshold, cap=cap)
    return part, coloring


def interval_protocol(f: FunctionSpec, r_sq=None, *, threshold=None, coloring=None, cap=None) -> ProtocolSpec:
    """Interval protocol with interval length ``r_sq`` (default d, i.e. r = sqrt(d))."""
    part, coloring = _interval_parts(f, r_sq, threshold, coloring, cap)
    return ProtocolSpec("interval", f, part, coloring)


def kplayer_protocol(
    f: FunctionSpec, r_sq=None, *, symmetrize=True, threshold=None, coloring=None, cap=None
) -> ProtocolSpec:
    part, coloring = _interval_parts(f, r_sq, threshold, coloring, cap)
    return ProtocolSpec("kplayer", f, part, coloring, symmetrize)


def make_protocol(name, f, r_sq=None, **kw):
    if name == "simple":
        return simple_protocol(f)
    if name == "interval":
        return interval_protocol(f, r_sq, **kw)
    if name == "kplayer":
        return kplayer_protocol(f, r_sq, **kw)
    raise ParameterError(f"unknown protocol {name!r}")


def run(p, x) -> tuple[Transcript, int]:
    return p.run(tuple(x))


# domain sweeps -------------------------------------------------------------------------


def _sweep_slice(p, first):
    dims = p.function.dims
    out = []
    for rest in product(*(range(s) for s in dims[1:])):
        x = (first,) + rest
        t, bit = p.run(x)
        out.append((x, t, bit))
    return out


def sweep(p, cap=None, threads=1):
    """Yield (input, transcript, output) for every input, in lexicographic order."""
    f = p.function
    guard(f.domain_size, cap)
    firsts = range(f.dims[0])
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(_sweep_slice, [p] * len(firsts), firsts):
                yield from chunk
    else:
        for first in firsts:
            yield from _sweep_slice(p, first)


def cost(p, f=None, cap=None, threads=1) -> int:
    """Maximum number of bits written by players 1..k-1, over the whole domain."""
    _check_function(p, f)
    return max(t.charged_bits for _, t, _ in sweep(p, cap, threads))


def check_correct(p, f=None, cap=None, threads=1, limit=None) -> list:
    """Inputs on which the protocol output differs from the function (empty = correct)."""
    f = _check_function(p, f)
    bad = []
    for x, _, bit in sweep(p, cap, threads):
        if bit != f(x):
            bad.append(x)
            if limit is not None and len(bad) >= limit:
                break
    return bad


def _check_function(p, f):
    if f is not None and f != p.function:
        raise ParameterError("protocol was built for a different function")
    return p.function


# transcript sets ----------------------------------------------------------------------


@dataclass(frozen=True)
class EntrySet:
    k: int
    dims: tuple[int, ...]
    entries: frozenset = field(default_factory=frozenset)
    origin: str = "synthetic"

    def __post_init__(self):
        entries = frozenset(tuple(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        for e in entries:
            if len(e) != self.k or any(not 0 <= v < s for v, s in zip(e, self.dims)):
                raise ParameterError(f"entry {e} outside dims {self.dims}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries))

    def __contains__(self, e):
        return tuple(e) in self.entries

    def density(self) -> float:
        return len(self.entries) / self.dims[0] ** (self.k - 1)


def transcript_histogram(p, cap=None) -> Counter:
    """Size of S_k(T) for every last-player transcript T that occurs on a 1-entry."""
    f = p.function
    guard(f.domain_size, cap)
    return Counter(p.run(x)[0].last_part for x in f.ones())


def choose_transcript(p, strategy="auto", cap=None) -> str:
    """Resolve a transcript choice to a bit string.

    ``auto`` picks the most frequent last-player transcript (ties: smallest
    bit string) for the simple protocol and I_r(mu) for the interval-based ones;
    ``mu`` forces I_r(mu); ``explicit:<bits>`` (or a bare bit string) is taken as is.
    """
    if strategy.startswith("explicit:"):
        strategy = strategy[len("explicit:") :]
        if strategy and set(strategy) - {"0", "1"}:
            raise ParameterError(f"not a bit string: {strategy!r}")
        return strategy
    if strategy == "mu" or (strategy == "auto" and getattr(p, "name", None) in ("interval", "kplayer")):
        return p.mean_transcript()
    if strategy == "auto":
        hist = transcript_histogram(p, cap)
        if not hist:
            return ""
        return min(hist, key=lambda t: (-hist[t], t))
    if set(strategy) <= {"0", "1"}:
        return strategy
    raise ParameterError(f"unknown transcript strategy {strategy!r}")


def transcript_set(p, t: str, scope="last_player", f=None, cap=None) -> EntrySet:
    """S_k(t) (scope ``last_player``) or the cylinder intersection S(t) (scope ``full``)."""
    f = _check_function(p, f)
    if scope not in ("last_player", "full"):
        raise ParameterError(f"unknown scope {scope!r}")
    guard(f.domain_size, cap)
    hits = []
    for x in f.ones():
        tr, _ = p.run(x)
        if (tr.last_part if scope == "last_player" else tr.bits) == t:
            hits.append(x)
    origin = "last-player transcript" if scope == "last_player" else "full transcript"
    return EntrySet(f.k, tuple(f.dims), frozenset(hits), origin)


def check_symmetric(s: EntrySet) -> bool:
    for e in s.entries:
        head, z = e[:-1], e[-1]
        for perm in set(permutations(head)):
            if perm + (z,) not in s.entries:
                return False
    return True


def check_star_free(s: EntrySet, cap=None, limit=None) -> list:
    """Stars in ``s``: a centre c and k entries, the i-th differing from c only at i.

    Returns ``(centre, witnesses)`` pairs, one per centre with the smallest
    witnesses, in canonical order.
    """
    guard(len(s.entries), cap, "entry set")
    k = s.k
    by_line = [defaultdict(list) for _ in range(k)]
    for e in s.entries:
        for i in range(k):
            by_line[i][e[:i] + e[i + 1 :]].append(e[i])
    for idx in by_line:
        for key in idx:
            idx[key].sort()
    # (x_2..x_{k-1}) -> [(x_1', z)] for the first witness
    first = defaultdict(list)
    for e in s.entries:
        first[e[1:-1]].append((e[0], e[-1]))
    heads = sorted({e[:-1] for e in s.entries})

    stars = []
    for head in heads:
        zs = sorted({z for a, z in first.get(head[1:], ()) if a != head[0]})
        for z in zs:
            centre = head + (z,)
            witnesses = []
            for i in range(k):
                vals = [v for v in by_line[i].get(centre[:i] + centre[i + 1 :], ()) if v != centre[i]]
                if not vals:
                    break
                witnesses.append(centre[:i] + (vals[0],) + centre[i + 1 :])
            else:
                stars.append((centre, tuple(witnesses)))
                if limit is not None and len(stars) >= limit:
                    return stars
    return stars


# augmentation --------------------------------------------------------------------------


def _charged_code(p, x, gamma):
    tr, _ = p.run(x)
    bits = tr.charged
    if len(bits) > gamma:
        raise ContractError(f"transcript longer than the protocol cost on {x}")
    return int(bits.ljust(gamma, "0"), 2) if gamma else 0


@dataclass(frozen=True)
class AugmentedFunction:
    """g(x_1..x_{k-1}, (x_k, T)) = 1 iff f = 1 and T is the charged transcript of P.

    The last argument indexes [N] x {0,1}^gamma as ``x_k * 2^gamma + T`` with T
    padded on the right to gamma bits.
    """

    base: FunctionSpec
    protocol: ProtocolSpec
    gamma: int

    @property
    def k(self):
        return self.base.k

    @property
    def n(self):
        return self.base.n

    @property
    def N(self):
        return self.base.N * 2**self.gamma

    @property
    def dims(self):
        return self.base.dims[:-1] + (self.N,)

    @property
    def domain_size(self):
        return math.prod(self.dims)

    def split(self, last):
        return divmod(last, 2**self.gamma)

    def __call__(self, x) -> int:
        x = tuple(x)
        if len(x) != self.k or any(not 0 <= v < s for v, s in zip(x, self.dims)):
            raise ParameterError(f"input {x} outside the domain {self.dims}")
        j, tau = self.split(x[-1])
        inner = x[:-1] + (j,)
        return int(self.base(inner) == 1 and _charged_code(self.protocol, inner, self.gamma) == tau)

    def ones(self):
        shift = 2**self.gamma
        for x in self.base.ones():
            yield x[:-1] + (x[-1] * shift + _charged_code(self.protocol, x, self.gamma),)


@dataclass(frozen=True)
class AugmentedProtocol:
    """The protocol P' for the augmented function.

    The last player sends his message from P; then each player 1..k-1 writes one
    bit confirming that his part of the transcript carried in the last argument
    agrees with P and that P accepts.
    """

    function: AugmentedFunction

    @property
    def k(self):
        return self.function.k

    @property
    def name(self):
        return "augmented-" + self.function.protocol.name

    def run(self, x):
        g = self.function
        if len(x) != g.k or any(not 0 <= v < s for v, s in zip(x, g.dims)):
            raise ParameterError(f"input {x} outside the domain {g.dims}")
        j, tau = g.split(x[-1])
        inner = tuple(x[:-1]) + (j,)
        tr, out = g.protocol.run(inner)
        claimed = format(tau, f"0{g.gamma}b") if g.gamma else ""
        board = [(g.k, tr.last_part)]
        pos = 0
        for i in range(1, g.k):
            mine = tr.part(i)
            ok = claimed[pos : pos + len(mine)] == mine and out == 1
            pos += len(mine)
            if i == 1:
                ok = ok and set(claimed[tr.charged_bits :]) <= {"0"}
            board.append((i, str(int(ok))))
        bit = int(all(b == "1" for _, b in board[1:]))
        return Transcript(g.k, tuple(board)), bit


def augment(f: FunctionSpec, p: ProtocolSpec, t_k: str, gamma=None, cap=None):
    """Return (g, S', P') for the last-player transcript ``t_k``.

    ``gamma`` defaults to the exact cost of ``p``.
    """
    _check_function(p, f)
    if gamma is None:
        gamma = cost(p, cap=cap)
    g = AugmentedFunction(f, p, gamma)
    s = transcript_set(p, t_k, "last_player", cap=cap)
    shift = 2**gamma
    lifted = frozenset(x[:-1] + (x[-1] * shift + _charged_code(p, x, gamma),) for x in s.entries)
    s_prime = EntrySet(f.k, tuple(g.dims), lifted, "augmented")
    return g, s_prime, AugmentedProtocol(g)
