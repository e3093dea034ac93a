import pytest

import gramdist


def test_round_trip_and_length():
    g = gramdist.compress("abracadabra" * 20)
    assert len(g) == 220
    assert g.expand() == "abracadabra" * 20
    assert g.char_at(4) == "c"
    again = gramdist.Slp.from_slpv1(g.to_slpv1())
    assert again.expand() == g.expand()


def test_two_string_measures():
    assert gramdist.edit_distance("kitten", "sitting") == 3
    assert gramdist.hamming("karolin", "kathrin") == 3
    assert gramdist.deletion_distance_bounded("abc", "abd", 1) is None
    assert gramdist.deletion_distance_bounded("abc", "abd", 2) == 2
    v = gramdist.edit_distance_approx("abcabcabcabc", "abcabcbcabc", epsilon=0.5)
    assert 1 <= v <= 1.5
    assert gramdist.lcs_approx("abracadabra", "abracadabra", 0.3) == 11


def test_grammar_and_text_inputs_mix():
    g = gramdist.Slp.from_text("ababab")
    assert gramdist.edit_distance(g, "abab") == 2


def test_multi_string_measures():
    assert gramdist.median_edit_approx(["abba"] * 3) == 0
    assert gramdist.bounded_k_edit(["ab", "ab", "b"], 3) == 1
    assert gramdist.bounded_k_edit(["ab", "ab", "b"], 0) is None
    c = gramdist.center_edit_approx(["abba", "abab", "baba"], 1.0)
    assert 1 <= c <= 2
    assert gramdist.hamming_multi(["ab", "ab", "ba"], "median") == 2


def test_shift():
    r = gramdist.shift_match(["abcab", "cabab"])
    assert r["score"] == 5 and r["distance"] == 0
    lo, hi = gramdist.shift_bracket(["ab", "ba", "ab", "ba", "ab"], 2)
    assert lo <= hi


def test_errors_raise():
    with pytest.raises(gramdist.GramdistError):
        gramdist.edit_distance_approx("ab", "ba", epsilon=2.0)
    with pytest.raises(gramdist.GramdistError):
        gramdist.compress("")
    with pytest.raises(ValueError):
        gramdist.hamming("ab", "abc")
