import numpy as np
import pytest
from scipy import stats

from qxpile.dialects import builtin_dialects
from qxpile.ir import KINDS, gatecount, idle_qubits, structural_eq
from qxpile.qasm2 import emit
from qxpile.randgen import (
    PURE_RANDOM_KINDS,
    HEAParams,
    InvalidParams,
    derive_rng,
    dialect_gate_circuits,
    generate,
    pure_random,
    range_gates,
    read_corpus,
    sdk_gate_corpus,
    standard_corpus,
    vqe,
    write_corpus,
)

VQE_KINDS = {KINDS[n] for n in ("rx", "ry", "rz", "cx", "h", "sdg")}


def test_pure_random_vocabulary():
    assert len(PURE_RANDOM_KINDS) == 25
    assert {k.name for k in PURE_RANDOM_KINDS} == set(
        "x y z h s sdg t tdg sx sxdg p rx ry rz cx cy cz ch swap crx cry crz cp rxx rzz".split()
    )


def test_pure_random_fixed_shape():
    for s in range(20):
        c = pure_random(s, 2, 4)
        assert (c.nb_qubits, gatecount(c)) == (2, 4)
        assert idle_qubits(c) == set()
        assert c.circuit_type == "PureRandom"


@pytest.mark.parametrize("args", [(5, 4), (1, 3), (1, None)])
def test_pure_random_invalid(args):
    with pytest.raises(InvalidParams):
        pure_random(0, *args)


def test_pure_random_ranges_over_1000_seeds():
    seen_q, seen_g = set(), set()
    for s in range(1200):
        c = pure_random(s)
        n, m = c.nb_qubits, gatecount(c)
        assert 2 <= n <= 10 and n <= m <= 100
        assert idle_qubits(c) == set()
        assert {g.kind for g in c.gates} <= set(PURE_RANDOM_KINDS)
        assert all(0 <= p < 2 * np.pi for g in c.gates for p in g.params)
        seen_q.add(n)
        seen_g.add(m)
    assert seen_q == set(range(2, 11))
    assert min(seen_g) <= 5 and max(seen_g) == 100


def test_phase_two_kinds_uniform():
    # one long circuit: phase 1 covers at most 10 gates, the rest are uniform
    rng = np.random.default_rng(7)
    counts = dict.fromkeys(PURE_RANDOM_KINDS, 0)
    total = 0
    while total < 100_000:
        c = pure_random(rng, 10, 10_010)
        for g in c.gates[10:]:
            counts[g.kind] += 1
            total += 1
    obs = np.array(list(counts.values()))
    chi2, p = stats.chisquare(obs)
    assert p > 1e-3, (chi2, p)
    expected = total / len(obs)
    sigma = np.sqrt(expected * (1 - 1 / len(obs)))
    assert np.all(np.abs(obs - expected) <= 4 * sigma)


def test_range_gates():
    cs = range_gates(1, 2, 2, 101)
    assert len(cs) == 99
    assert [gatecount(c) for c in cs] == list(range(2, 101))
    assert [gatecount(c) for c in range_gates(1, 2, 2, 10, 4)] == [2, 6]
    for bad in [(10, 5, 20), (2, 5, 5), (2, 2, 10, 0)]:
        with pytest.raises(InvalidParams):
            range_gates(1, *bad)


def test_vqe_single_kind_pattern():
    c = vqe(3, 2, HEAParams(1, "linear", 3))
    names = [g.name for g in c.gates]
    k = names[0]
    assert k in ("rx", "ry", "rz")
    assert names[:11] == [k, k, "cx"] * 3 + [k, k]
    assert [g.qubits for g in c.gates[:3]] == [(0,), (1,), (0, 1)]
    assert set(names[11:]) <= {"h", "sdg"}


def test_vqe_two_kinds_blocks():
    c = vqe(5, 3, HEAParams(2, "circular", 2))
    block = c.gates[:6]
    kinds = [g.name for g in block]
    assert kinds[0] == kinds[1] == kinds[2] != kinds[3] == kinds[4] == kinds[5]
    ent = [g.qubits for g in c.gates[6:9]]
    assert ent == [(0, 1), (1, 2), (2, 0)]
    # reps x (6 rotations + 3 cx) + 6 final rotations
    body = 2 * 9 + 6
    assert [g.name for g in c.gates[18:24]] == kinds
    assert set(g.name for g in c.gates[body:]) <= {"h", "sdg"}


def test_vqe_pauli_layer_shape():
    for s in range(200):
        c = vqe(s, 4, HEAParams(1, "linear", 1))
        tail = c.gates[4 + 3 + 4:]
        for i, g in enumerate(tail):
            if g.name == "sdg":
                assert tail[i + 1].name == "h" and tail[i + 1].qubits == g.qubits


def test_vqe_random_params():
    for s in range(300):
        c = vqe(s)
        assert 2 <= c.nb_qubits <= 10
        assert {g.kind for g in c.gates} <= VQE_KINDS
        assert idle_qubits(c) == set()
        assert c.circuit_type == "VQE"


def test_hea_ranges():
    rng = np.random.default_rng(0)
    draws = [HEAParams.random(rng) for _ in range(500)]
    assert {h.nb_su2_gates for h in draws} == {1, 2, 3}
    assert {h.reps for h in draws} == {1, 2, 3, 4}
    assert {h.entanglement for h in draws} == {"linear", "circular"}
    for bad in [(0, "linear", 1), (4, "linear", 1), (1, "ring", 1), (1, "linear", 0)]:
        with pytest.raises(InvalidParams):
            HEAParams(*bad)


def test_dialect_gate_circuits():
    d = builtin_dialects()["avalon"]
    cs = dialect_gate_circuits(d, 0)
    assert len(cs) == len(d.supported) == 36
    ccx = cs["avalon-ccx"]
    assert (ccx.nb_qubits, gatecount(ccx), idle_qubits(ccx)) == (3, 1, set())
    assert all(c.circuit_type == "SDKGate" for c in cs.values())
    corpus = sdk_gate_corpus(d, 0, 50)
    assert len(corpus) == 50 * 36


def test_determinism():
    for s in range(50):
        assert structural_eq(pure_random(s), pure_random(s), 0.0)
        assert structural_eq(vqe(s), vqe(s), 0.0)
    assert emit(pure_random(9)) == emit(pure_random(9))
    assert derive_rng(3, 1).random() == derive_rng(3, 1).random()
    assert derive_rng(3, 1).random() != derive_rng(3, 2).random()


def test_generate_independent_of_jobs():
    a = generate("pure", 4, 8, jobs=1)
    b = generate("pure", 4, 8, jobs=2)
    assert [emit(x) for x in a] == [emit(x) for x in b]
    assert [c.name for c in a] == [f"PureRandom-{i:03d}" for i in range(8)]


def test_standard_corpus_and_io(tmp_path):
    d = builtin_dialects()["avalon"]
    cs = standard_corpus(0, d, count=4)
    assert len(cs) == 4 + 4 + 4 * 36
    write_corpus(cs, tmp_path)
    back = read_corpus(tmp_path)
    assert len(back) == len(cs)
    for a, b in zip(cs, back):
        assert structural_eq(a, b, 0.0)
        assert (a.name, a.circuit_type) == (b.name, b.circuit_type)
    header = (tmp_path / "corpus.csv").read_text().splitlines()[0]
    assert header == "circuit_name,circuit_type,nb_qubits,gatecount,file"
