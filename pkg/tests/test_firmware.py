import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dso.firmware import (
    MAX_DEPTH,
    TERMINALS,
    Binary,
    DepthError,
    EvalContext,
    Firmware,
    FirmwareSyntaxError,
    LiteralRangeError,
    Negate,
    Terminal,
    contains_coordinate,
    depth,
    eval_expr,
    literal,
    mutate_firmware,
    parse,
    random_firmware,
    recombine_firmware,
    serialize,
)

X, TB, GB, R1, R2 = (Terminal(n) for n in ("x", "tb", "gb", "r1", "r2"))


def tree_strategy(max_depth=MAX_DEPTH):
    leaf = st.one_of(
        st.sampled_from([Terminal(n) for n in TERMINALS]),
        st.floats(-10, 10, allow_nan=False).map(literal),
    )
    if max_depth == 1:
        return leaf
    sub = st.deferred(lambda: tree_strategy(max_depth - 1))
    return st.one_of(
        leaf,
        sub.map(Negate),
        st.builds(Binary, st.sampled_from("+-*/"), sub, sub),
    )


TREES = tree_strategy()


def ctx(x, tb=None, gb=None, r1=None, r2=None, seed=0, **kw):
    x = np.asarray(x, dtype=float)
    pick = lambda v: x if v is None else np.asarray(v, dtype=float)
    return EvalContext(x, pick(tb), pick(gb), pick(r1), pick(r2), np.random.default_rng(seed), **kw)


# ------------------------------------------------------------------ parsing

def test_parse_precedence():
    assert parse("x + C1*(r1 - r2)") == Binary("+", X, Binary("*", Terminal("C1"), Binary("-", R1, R2)))


def test_parse_left_associative():
    assert parse("x - tb - gb") == Binary("-", Binary("-", X, TB), GB)
    assert parse("x / tb * gb") == Binary("*", Binary("/", X, TB), GB)


def test_parse_unary_and_literals():
    assert parse("-x") == Negate(X)
    assert parse("--x") == Negate(Negate(X))
    assert parse("-2.5 * x") == Binary("*", literal(-2.5), X)
    assert parse("x - -1e-3") == Binary("-", X, literal(-0.001))
    assert parse(" x\t+\n.5 ") == Binary("+", X, literal(0.5))


def test_unbalanced_parenthesis():
    with pytest.raises(FirmwareSyntaxError, match="end of input") as info:
        parse("(gb - x")
    assert info.value.position == len("(gb - x")


@pytest.mark.parametrize("src, pos", [("x + ", 4), ("x $ gb", 2), ("x gb", 2), ("foo + x", 0), ("X", 0), (")", 0), ("", 0)])
def test_syntax_errors_carry_position(src, pos):
    with pytest.raises(FirmwareSyntaxError) as info:
        parse(src)
    assert info.value.position == pos


def test_literal_range():
    assert parse("10") == literal(10.0)
    assert parse("-10") == literal(-10.0)
    with pytest.raises(LiteralRangeError):
        parse("x + 10.5")
    with pytest.raises(LiteralRangeError):
        parse("-11 * x")


def test_depth_limit():
    assert depth(parse("-" * 6 + "x")) == 7
    with pytest.raises(DepthError):
        parse("-" * 7 + "x")


def test_serialize_examples():
    assert serialize(X) == "x"
    assert serialize(Binary("+", X, GB)) == "(x + gb)"
    assert serialize(Negate(literal(3.0))) == "(-(3.0))"
    assert serialize(literal(-3.0)) == "-3.0"


@settings(max_examples=1000)
@given(TREES)
def test_round_trip_random_trees(tree):
    assert parse(serialize(tree)) == tree


def test_round_trip_generated_trees():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        t = random_firmware(rng, MAX_DEPTH)
        assert parse(serialize(t)) == t


# ------------------------------------------------------------------ evaluation

def test_eval_identity():
    assert eval_expr(parse("x"), ctx([1, 2])).tolist() == [1.0, 2.0]


def test_eval_scaled_difference():
    out = eval_expr(parse("C1*(tb - x)"), ctx([0, 0], tb=[2, 2], c1=0.5))
    assert out.tolist() == [1.0, 1.0]


def test_protected_division():
    assert eval_expr(parse("x / (x - x)"), ctx([3, 3])).tolist() == [1.0, 1.0]
    out = eval_expr(parse("x / tb"), ctx([3, 3], tb=[1e-13, 2.0]))
    assert out.tolist() == [1.0, 1.5]


def test_constants_broadcast():
    out = eval_expr(parse("C2 + 1"), ctx([0, 0, 0], c2=0.3))
    assert out.shape == (3,)
    assert out.tolist() == pytest.approx([1.3, 1.3, 1.3])


def test_fresh_draws_per_occurrence():
    tree = parse("U - U")
    c = ctx([0.0, 0.0], seed=99)
    nonzero = sum(np.any(eval_expr(tree, c) != 0.0) for _ in range(1000))
    assert nonzero == 1000


def test_normal_terminal_statistics():
    c = ctx(np.zeros(4), seed=5)
    draws = np.array([eval_expr(Terminal("N"), c) for _ in range(5000)])
    assert abs(draws.mean()) < 0.05
    assert abs(draws.std() - 1.0) < 0.05


def test_evaluation_never_raises_on_overflow():
    big = "(x * 10) * (x * 10) * (x * 10) * (x * 10)"
    out = eval_expr(parse(big), ctx([1e300, -1e300]))
    assert out.shape == (2,)


def test_firmware_object():
    fw = Firmware.from_source("x + N*(gb - x)")
    assert fw.source == "(x + (N * (gb - x)))"
    assert fw == Firmware(parse(fw.source))
    assert len(fw.digest) == 8
    assert fw(ctx([1.0, 1.0])).tolist() == [1.0, 1.0]


# ------------------------------------------------------------------ variation

def _valid(tree):
    return depth(tree) <= MAX_DEPTH and parse(serialize(tree)) == tree


def test_random_firmware_depth_two():
    rng = np.random.default_rng(0)
    for _ in range(200):
        assert depth(random_firmware(rng, 2)) <= 2


def test_random_firmware_properties():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        t = random_firmware(rng, MAX_DEPTH)
        assert _valid(t) and contains_coordinate(t)


def test_random_firmware_rejects_bad_depth():
    with pytest.raises(ValueError):
        random_firmware(np.random.default_rng(0), 1)
    with pytest.raises(ValueError):
        random_firmware(np.random.default_rng(0), 8)


def test_random_firmware_deterministic():
    a = random_firmware(np.random.default_rng(42), 6)
    b = random_firmware(np.random.default_rng(42), 6)
    assert a == b


def test_mutating_single_terminal_replaces_tree():
    rng = np.random.default_rng(3)
    out = mutate_firmware(X, rng)
    # first draw picks the root (only node); the rest regrows a full tree
    rng2 = np.random.default_rng(3)
    rng2.integers(1)
    assert out == random_firmware(rng2, MAX_DEPTH)
    assert contains_coordinate(out)


def test_mutation_does_not_modify_input():
    tree = parse("x + C1*(r1 - r2)")
    before = serialize(tree)
    rng = np.random.default_rng(0)
    for _ in range(100):
        mutate_firmware(tree, rng)
    assert serialize(tree) == before


def test_mutation_closure_and_determinism():
    rng = np.random.default_rng(8)
    tree = parse("x + C1*U*(tb - x) + C2*U*(gb - x)")
    for _ in range(10_000):
        tree = mutate_firmware(tree, rng)
        assert depth(tree) <= MAX_DEPTH
    assert _valid(tree)
    start = parse("tb + C1*(r1 - r2)")
    assert mutate_firmware(start, np.random.default_rng(5)) == mutate_firmware(start, np.random.default_rng(5))


def test_recombine_single_nodes():
    assert recombine_firmware(X, GB, np.random.default_rng(0)) == GB


def test_recombine_closure_and_determinism():
    rng = np.random.default_rng(9)
    pool = [random_firmware(rng, MAX_DEPTH) for _ in range(50)]
    for _ in range(10_000):
        i, j = rng.integers(len(pool), size=2)
        child = recombine_firmware(pool[i], pool[j], rng)
        assert depth(child) <= MAX_DEPTH
        pool[int(rng.integers(len(pool)))] = child
    assert all(_valid(t) for t in pool)
    a, b = parse("x + N*(gb - x)"), parse("r1 + U*(gb - r1)")
    assert recombine_firmware(a, b, np.random.default_rng(4)) == recombine_firmware(a, b, np.random.default_rng(4))


@given(TREES, TREES, st.integers(0, 2**32 - 1))
def test_variation_keeps_invariants(a, b, seed):
    rng = np.random.default_rng(seed)
    assert _valid(mutate_firmware(a, rng))
    assert _valid(recombine_firmware(a, b, rng))
