import numpy as np
import pytest

from util import TypeUtils, eps


def test_eps():
    assert eps(3) == pytest.approx(1e-3)
    assert TypeUtils.eps(2, dtype=np.float32).dtype == np.float32
    with pytest.raises(TypeError):
        eps(1.0)
    with pytest.raises(TypeError):
        eps(True)
    with pytest.raises(ValueError):
        eps(-1)


def test_als_komplexmatrix():
    roh = [[1, 2], [3, 4]]
    matrix = TypeUtils.als_komplexmatrix(roh)
    assert matrix.dtype == np.complex128
    matrix[0, 0] = 7
    assert roh[0][0] == 1
    with pytest.raises(ValueError):
        TypeUtils.als_komplexmatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        TypeUtils.als_komplexmatrix([[np.nan, 0], [0, 1]])


def test_hermitizitaet():
    h = np.array([[1.0, 1j], [-1j, 2.0]])
    assert TypeUtils.hermitizitaet_defekt(h) == 0.0
    assert TypeUtils.ist_hermitesch(h)
    assert not TypeUtils.ist_hermitesch(h + np.array([[0, 1e-9], [0, 0]]))
    assert TypeUtils.ist_hermitesch(h + np.array([[0, 1e-9], [0, 0]]), exp10=8)
    assert TypeUtils.hermitizitaet_defekt(np.zeros((0, 0))) == 0.0


def test_normiert():
    v = TypeUtils.normiert([3, 4j])
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert v[1] == pytest.approx(0.8j)
    with pytest.raises(ValueError):
        TypeUtils.normiert([0, 0])
    with pytest.raises(ValueError):
        TypeUtils.normiert(np.eye(2))
