import json

import numpy as np
import pytest

from bephase import criteria, distill, formats, protocol, states, witness
from bephase.errors import ParseError
from bephase.fixtures import ppt_entangled_fixture


def test_state_round_trip_is_exact(tmp_path):
    rho = states.random_density(2, 3, seed=1)
    path = tmp_path / "s.json"
    formats.dump_json(formats.state_to_json(rho), path)
    back = formats.load_state(path)
    assert back.dims == (2, 3)
    np.testing.assert_array_equal(back.mat, rho.mat)


def test_state_layout():
    rho = states.DensityOperator(np.diag([0.25, 0.75]), 1, 2)
    data = formats.state_to_json(rho)
    assert data["dim_a"] == 1 and data["dim_b"] == 2
    assert data["matrix"][1][1] == [0.75, 0.0]


def test_vector_file_loads_as_projector(tmp_path):
    v = states.maximally_entangled(3)
    path = tmp_path / "v.json"
    formats.dump_json(formats.vector_to_json(v), path)
    np.testing.assert_allclose(formats.load_state(path).mat, v.projector().mat, atol=1e-15)


def test_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        formats.load_state(bad)
    bad.write_text(json.dumps({"dim_a": 2}))
    with pytest.raises(ParseError):
        formats.load_state(bad)
    bad.write_text(json.dumps({"dim_a": 2, "dim_b": 2, "matrix": [[[1, 0]]]}))
    with pytest.raises(ParseError):
        formats.load_state(bad)


def test_witness_round_trip():
    rho = states.isotropic(3, 0.7)
    wv = criteria.p_reduction_value(rho, states.maximally_entangled(3), 3)
    data = json.loads(json.dumps(formats.witness_to_json(wv)))
    back = formats.witness_from_json(data, rho)
    assert back.value == wv.value
    with pytest.raises(ParseError):
        formats.witness_from_json(data, states.isotropic(3, 0.8))


def test_certificate_round_trip(phi2):
    cert = distill.rank2_witness_search(phi2)
    data = json.loads(json.dumps(formats.certificate_to_json(cert)))
    back = formats.certificate_from_json(data, phi2)
    assert back.epsilon == cert.epsilon
    np.testing.assert_array_equal(back.psi.amps, cert.psi.amps)
    with pytest.raises(ParseError):
        formats.certificate_from_json(data, states.isotropic(2, 0.5))


def test_edge_witness_round_trip():
    w = witness.build_edge_witness(ppt_entangled_fixture())
    data = json.loads(json.dumps(formats.edge_witness_to_json(w)))
    assert {"P", "Q", "epsilon"} <= set(data)
    back = formats.edge_witness_from_json(data)
    assert back.epsilon == w.epsilon
    np.testing.assert_array_equal(back.W, w.W)


def test_schmidt_certificate_json():
    cert = protocol.run_protocol(states.isotropic(3, 0.8), states.maximally_entangled(3), 3)
    data = formats.schmidt_certificate_to_json(cert)
    assert data["m"] == 3 and data["p_lower"] == 3
    assert np.array(data["filter"]).shape == (3, 3, 2)
