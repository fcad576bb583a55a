"""Design interchange and alist round-trips."""

import io

import pytest

from eaqldpc import formats
from eaqldpc.designs import DesignError
from eaqldpc.eaqecc import POINT_BY_BLOCK, oriented_matrix


def test_design_roundtrip_byte_identical(fano):
    buf = io.StringIO()
    formats.write_design(fano.structure, buf)
    text = buf.getvalue()
    S = formats.read_design(io.StringIO(text))
    buf2 = io.StringIO()
    formats.write_design(S, buf2)
    assert buf2.getvalue() == text
    assert S.blocks == fano.structure.blocks and S.v == fano.structure.v


def test_design_reader_skips_comments(fano):
    buf = io.StringIO()
    formats.write_design(fano.structure, buf, comments=["fano", "coords: ..."])
    S = formats.read_design(io.StringIO(buf.getvalue()))
    assert S.blocks == fano.structure.blocks


def test_design_reader_rejects_bad_count():
    with pytest.raises(DesignError):
        formats.read_design(io.StringIO("3 2\n0 1 2\n"))


def test_base_block_file():
    v, bases = formats.read_base_blocks(io.StringIO("13\n0 1 4\n0 2 7\n"))
    assert v == 13 and bases == [(0, 1, 4), (0, 2, 7)]


def test_alist_fano(fano):
    H = oriented_matrix(fano.structure, POINT_BY_BLOCK)
    buf = io.StringIO()
    formats.write_alist(H, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "7 7"
    assert lines[1] == "3 3"  # regular degrees
    back = formats.read_alist(io.StringIO(buf.getvalue()))
    assert back == H


def test_alist_roundtrip_irregular(cache):
    # deletion makes the matrix slightly irregular: exercises zero padding
    from eaqldpc.designs import delete_subdesigns

    design = cache.geometry("PG", 5, 2)
    spread = cache.spread("PG", 5, 2, 2)
    folded = delete_subdesigns(design.structure, spread, 1)
    H = oriented_matrix(folded, POINT_BY_BLOCK)
    buf = io.StringIO()
    formats.write_alist(H, buf)
    assert formats.read_alist(io.StringIO(buf.getvalue())) == H


def test_alist_rejects_corrupt():
    with pytest.raises(DesignError):
        formats.read_alist(io.StringIO("4 2\n1 2\n1 1 1 1\n2 2\n1\n2\n1\n2\n"))
