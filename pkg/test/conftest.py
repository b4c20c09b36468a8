import pytest

from loopforge.formats import read_folder, read_group, read_loop
from loopforge.permcore import Perm, PermGroup, symmetric_group


@pytest.fixture
def c4():
    return read_loop("corpus:c4.loop")

@pytest.fixture
def v8():
    return read_loop("corpus:v8.loop")

@pytest.fixture
def s3_loop():
    return read_loop("corpus:s3.loop")

@pytest.fixture
def nonassoc5():
    return read_loop("corpus:nonassoc5.loop")

@pytest.fixture
def d8():
    return read_group("corpus:d8.group")

@pytest.fixture
def sym3():
    return symmetric_group(3)

@pytest.fixture
def sym4():
    return symmetric_group(4)

@pytest.fixture
def v4():
    return PermGroup(4, [Perm((1, 0, 3, 2)), Perm((2, 3, 0, 1))])

@pytest.fixture
def d8_folder():
    """(D8, <r>, {1, s}): a folder to C2 that is neither faithful nor an envelope"""
    return read_folder("corpus:d8_example.folder")

@pytest.fixture
def s3_a3():
    return read_folder("corpus:s3_a3.folder")

@pytest.fixture
def s4_hypa():
    return read_folder("corpus:s4_hypa.folder")

@pytest.fixture
def bol8():
    """Faithful BX2P envelope with |G| = 16 of a nonassociative Bruck loop of exponent 2"""
    return read_folder("corpus:bol8.folder")
