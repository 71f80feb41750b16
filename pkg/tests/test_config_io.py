import json

import numpy as np
import pytest

from tsim.config import ConfigError, OutputOptions, parse_config, serialize_config
from tsim.io import (read_state, read_trajectory, write_operator, write_phases,
                     write_state, write_trajectory)
from tsim.model import LatticeSpec, ModelParams, build_full
from tsim.fock import enumerate_basis
from tsim.propagate import ManyBodyState
from tsim.protocol import ProtocolConfig, run_protocol

MINIMAL = """
{"lattice": {"sites": 6, "chain": true},
 "particles": {"tau": 2, "upsilon": 2}}
"""


def test_minimal_document_defaults():
    config, output = parse_config(MINIMAL)
    assert config.lattice.edges == tuple((i, i + 1) for i in range(5))
    assert config.params.j_tau == 1.0
    assert config.params.j_upsilon == 1.0
    assert config.params.u_tau == (0.0,) * 6
    assert config.params.u_cross == 1.0
    assert config.t1 == 2.0 and config.t2 == 2.0
    assert config.cycles == 1
    assert config.master_seed == 0
    assert config.erasure.kind == "random-phase"
    assert config.erasure.species == "upsilon"
    assert config.initial == "domain-wall"
    assert output == OutputOptions()


def test_round_trip():
    config, output = parse_config(MINIMAL)
    text = serialize_config(config, output)
    config2, output2 = parse_config(text)
    assert config2 == config
    assert output2 == output
    # a second round trip is byte-identical
    assert serialize_config(config2, output2) == text


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="frobnicate: unknown key"):
        parse_config('{"lattice": {"sites": 4}, "particles": {"tau": 1, "upsilon": 1}, "frobnicate": 1}')
    with pytest.raises(ConfigError, match="params.potato: unknown key"):
        parse_config('{"lattice": {"sites": 4}, "particles": {"tau": 1, "upsilon": 1}, "params": {"potato": 2}}')


def test_particle_bound_error_names_key():
    doc = '{"lattice": {"sites": 6}, "particles": {"tau": 7, "upsilon": 2}}'
    with pytest.raises(ConfigError, match="particles.tau"):
        parse_config(doc)


def test_malformed_and_constraint_errors():
    with pytest.raises(ConfigError, match="malformed"):
        parse_config("{not json")
    with pytest.raises(ConfigError, match="lattice.sites"):
        parse_config('{"particles": {"tau": 1, "upsilon": 1}}')
    with pytest.raises(ConfigError, match="protocol.t1"):
        parse_config('{"lattice": {"sites": 4}, "particles": {"tau": 1, "upsilon": 1}, "protocol": {"t1": -1}}')
    with pytest.raises(ConfigError, match="protocol.cycles"):
        parse_config('{"lattice": {"sites": 4}, "particles": {"tau": 1, "upsilon": 1}, "protocol": {"cycles": 0}}')
    with pytest.raises(ConfigError, match="lattice.edges"):
        parse_config('{"lattice": {"sites": 4, "chain": true, "edges": [[0, 1]]}, "particles": {"tau": 1, "upsilon": 1}}')


def test_explicit_edges_and_potentials():
    doc = json.dumps({
        "lattice": {"sites": 4, "edges": [[0, 1], [2, 3], [1, 2]]},
        "particles": {"tau": 1, "upsilon": 1},
        "params": {"u_tau": [0.5, 0, 0, -0.5], "u_cross": 2.0},
    })
    config, _ = parse_config(doc)
    assert config.lattice.edges == ((0, 1), (2, 3), (1, 2))
    assert config.params.u_tau == (0.5, 0.0, 0.0, -0.5)
    assert config.params.u_cross == 2.0
    with pytest.raises(ConfigError, match="params.u_tau"):
        parse_config(doc.replace("[0.5, 0, 0, -0.5]", "[0.5, 0]"))


def test_site_phase_erasure_config():
    doc = json.dumps({
        "lattice": {"sites": 4},
        "particles": {"tau": 1, "upsilon": 1},
        "erasure": {"kind": "site-phase", "species": "tau", "site": 2,
                    "theta": 0.5},
    })
    config, _ = parse_config(doc)
    assert config.erasure.kind == "site-phase"
    assert config.erasure.site == 2
    with pytest.raises(ConfigError, match="erasure.site"):
        parse_config(doc.replace('"site": 2', '"site": 9'))
    with pytest.raises(ConfigError, match="erasure"):
        parse_config(doc.replace(', "theta": 0.5', ""))


def _desk_result(cycles=1, **overrides):
    cfg = ProtocolConfig(lattice=LatticeSpec.chain(6), n_tau=2, n_upsilon=2,
                         params=ModelParams.defaults(6), cycles=cycles,
                         **overrides)
    return run_protocol(cfg)


def test_trajectory_csv_shape_and_roundtrip(tmp_path):
    result = _desk_result(no_erasure_run=True)
    path = write_trajectory(result.records, tmp_path)
    rows = read_trajectory(path)
    assert len(rows) == len(result.records) == 5  # init + 4 stage rows
    stage_rows = [r for r in rows if r[1] != "init"]
    assert len(stage_rows) == 4
    assert stage_rows[-1][7] >= 1 - 1e-8  # fidelity of the closing stage
    init = rows[0]
    assert init[1] == "init" and init[3] == init[4] == init[5] == init[6] == 0.0
    # 17-significant-digit round trip is lossless
    for row, rec in zip(rows, result.records):
        assert row[0] == rec.cycle and row[1] == rec.stage
        assert row[2] == rec.model_time
        assert row[3] == rec.report.s_tau
        assert row[4] == rec.report.s_upsilon
        assert row[5] == rec.report.s_total
        assert row[6] == rec.report.s_ent
        assert row[7] == rec.report.fidelity_to_initial


def test_trajectory_rejects_empty(tmp_path):
    with pytest.raises(ValueError):
        write_trajectory([], tmp_path)


def test_state_dump_layout_and_bit_exact_roundtrip(tmp_path):
    rng = np.random.default_rng(8)
    amps = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    amps /= np.linalg.norm(amps)
    state = ManyBodyState(amps, (3, 4))
    path = write_state(state, tmp_path / "state.tsim")
    raw = path.read_bytes()
    assert raw[:4] == b"TSIM"
    assert len(raw) == 4 + 4 + 16 + 16 * 12
    loaded = read_state(path)
    assert loaded.dims == (3, 4)
    assert np.array_equal(loaded.amplitudes, state.amplitudes)


def test_state_dump_rejects_corruption(tmp_path):
    state = ManyBodyState(np.array([1.0 + 0j]), (1, 1))
    path = write_state(state, tmp_path / "state.tsim")
    data = bytearray(path.read_bytes())
    data[0] = ord(b"X")
    bad = tmp_path / "bad.tsim"
    bad.write_bytes(bytes(data))
    with pytest.raises(ValueError):
        read_state(bad)
    truncated = tmp_path / "short.tsim"
    truncated.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(ValueError):
        read_state(truncated)


def test_phase_dump(tmp_path):
    result = _desk_result(cycles=2, master_seed=4)
    path = write_phases(result.phases, tmp_path)
    lines = path.read_text().splitlines()
    assert lines[0] == "cycle,index,theta"
    assert len(lines) == 1 + 2 * 15
    cycle, index, theta = lines[1].split(",")
    assert (int(cycle), int(index)) == (1, 0)
    assert float(theta) == result.phases[0][1][0]


def test_operator_export_file(tmp_path):
    bt, bu = enumerate_basis(3, 1), enumerate_basis(3, 1)
    op = build_full(LatticeSpec.chain(3), ModelParams.defaults(3), bt, bu)
    path = write_operator(op, tmp_path / "h.coo")
    lines = path.read_text().splitlines()
    dim, nnz = (int(x) for x in lines[0].split())
    assert dim == 9 and nnz == len(lines) - 1 == op.nnz
