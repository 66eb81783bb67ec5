import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import CATALOG, DATA, brute_force_paths
from psentropy.graph_catalog import catalog, catalog_graph
from psentropy.errors import (
    CatalogError,
    DuplicateEdgeError,
    GraphSyntaxError,
    GraphValidationError,
    MetricError,
    PathError,
    UnknownVertexError,
)
from psentropy.graph import (
    METRIC,
    QUASI_METRIC,
    SEMI_METRIC,
    SINGULAR,
    classify_metric,
    enumerate_reduced_paths,
    metric_from_edges,
    parse_graph,
    parse_graph_file,
    path,
    translation_length,
)


class TestParse:
    def test_theta_file(self):
        g, lengths = parse_graph_file((DATA / "theta.graph").read_text())
        assert g.n == 6 and g.rank == 2
        assert lengths["a+"] == pytest.approx(1 / 3)

    def test_rose_file(self):
        g = parse_graph((DATA / "rose2.graph").read_text())
        assert g.n == 4 and g.rank == 2
        assert g.degree["p"] == 4

    def test_degree_one_rejected(self):
        with pytest.raises(GraphValidationError):
            parse_graph((DATA / "pendant.graph").read_text())

    def test_syntax_error_reports_line(self):
        with pytest.raises(GraphSyntaxError) as info:
            parse_graph("vertex u\nvertex v\nedge a u\n")
        assert info.value.line == 3
        assert info.value.kind == "syntax"

    def test_duplicate_edge(self):
        with pytest.raises(DuplicateEdgeError) as info:
            parse_graph("vertex p\nedge a p p\nedge a p p\n")
        assert info.value.kind == "duplicate-edge"

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertexError) as info:
            parse_graph("vertex p\nedge a p q\n")
        assert info.value.kind == "unknown-vertex"

    @pytest.mark.parametrize(
        "text",
        [
            "vertex p\nvertex q\nedge a p p\nedge b p p\nedge c q q\nedge d q q\n",  # disconnected
            "vertex p\nvertex q\nedge a p q\nedge b p q\n",  # rank 1
        ],
    )
    def test_validation_errors(self, text):
        with pytest.raises(GraphValidationError):
            parse_graph(text)

    def test_lenq_creates_quasi_metric(self):
        g, lengths = parse_graph_file("vertex p\nedge f p p 1/2\nedge g p p 0.5\nlenq f- 0.25\n")
        m = classify_metric(g, lengths)
        assert m.classification == QUASI_METRIC
        assert m.volume == pytest.approx(0.875)

    def test_partial_lengths_rejected(self):
        with pytest.raises(GraphSyntaxError):
            parse_graph_file("vertex p\nedge f p p 0.5\nedge g p p\n")

    def test_comments_and_blank_lines(self):
        g = parse_graph("# header\n\nvertex p  # base\nedge f p p\nedge g p p\n")
        assert g.edges == ("f+", "f-", "g+", "g-")

    def test_degree_two_flagged_not_rejected(self):
        g = parse_graph("vertex p\nvertex q\nedge f p p\nedge g p p\nedge x p q\nedge y q p\n")
        assert g.degree_two_vertices == ("q",)


class TestGraphStructure:
    @pytest.mark.parametrize("name", CATALOG + ["rose(3)", "theta(4)", "double-loop-theta"])
    def test_degree_sum_and_rank(self, name):
        g = catalog_graph(name)
        assert sum(g.degree.values()) == g.n
        assert g.rank == g.num_edges - len(g.vertices) + 1

    @pytest.mark.parametrize("name", CATALOG)
    def test_involution(self, name):
        g = catalog_graph(name)
        for e in g.edges:
            assert g.inverse(e) != e
            assert g.inverse(g.inverse(e)) == e
            assert g.origin(g.inverse(e)) == g.terminus(e)
            assert g.b(e)

    def test_theta_successors(self):
        g = catalog_graph("theta")
        assert g.b("a+") == ("b-", "c-")
        assert g.a("a+") == ("b-", "c-")

    def test_catalog_entries(self):
        g, m = catalog("theta")
        assert len(g.vertices) == 2 and g.num_edges == 3
        assert np.allclose(m.lengths, 1 / 3)
        g, m = catalog("K4")
        assert len(g.vertices) == 4 and g.num_edges == 6 and g.rank == 3
        assert set(g.degree.values()) == {3}
        assert np.allclose(m.lengths, 1 / 6)
        g, m = catalog("rose(2)")
        assert len(g.vertices) == 1 and g.num_edges == 2
        assert np.allclose(m.lengths, 0.5)

    def test_unknown_catalog_name(self):
        with pytest.raises(CatalogError):
            catalog("petersen")


class TestClassify:
    def test_uniform_theta(self):
        m = metric_from_edges(catalog_graph("theta"), [1 / 3] * 3)
        assert m.classification == METRIC
        assert m.volume == pytest.approx(1.0)

    def test_semi_metric(self):
        m = metric_from_edges(catalog_graph("theta"), [0, 0.5, 0.5])
        assert m.classification == SEMI_METRIC
        assert m.volume == 1.0

    def test_zero_loop_singular(self):
        m = metric_from_edges(catalog_graph("rose(2)"), [0, 1])
        assert m.classification == SINGULAR
        assert not m.usable

    def test_two_zero_theta_edges_singular(self):
        m = metric_from_edges(catalog_graph("theta"), [0, 0, 1])
        assert m.classification == SINGULAR

    def test_negative_rejected(self):
        with pytest.raises(MetricError):
            metric_from_edges(catalog_graph("theta"), [-0.1, 0.5, 0.6])

    def test_missing_edge_rejected(self):
        g = catalog_graph("rose(2)")
        with pytest.raises(MetricError):
            classify_metric(g, {"g1+": 1.0, "g1-": 1.0, "g2+": 1.0})

    def test_asymmetric_with_zero_singular(self):
        g = catalog_graph("rose(2)")
        assert classify_metric(g, [0.0, 0.5, 0.5, 0.5]).classification == SINGULAR

    @given(st.lists(st.floats(0.01, 5.0), min_size=6, max_size=6))
    def test_volume_involution_invariant(self, xs):
        g = catalog_graph("K4")
        m = metric_from_edges(g, xs)
        flipped = classify_metric(g, m.lengths[g.inverse_index])
        assert flipped.volume == pytest.approx(m.volume, rel=1e-15)
        assert m.volume == pytest.approx(sum(xs), rel=1e-12)


class TestEnumerate:
    def test_theta_one_edge(self):
        g = catalog_graph("theta")
        assert len(list(enumerate_reduced_paths(g, "u", 1))) == 3

    def test_theta_two_edges(self):
        g = catalog_graph("theta")
        # oracle: filter all edge sequences
        expected = len(brute_force_paths(g, 1, "u")) + len(brute_force_paths(g, 2, "u"))
        assert expected == 9
        assert len(list(enumerate_reduced_paths(g, "u", 2))) == 9

    def test_rose_two_edges(self):
        g = catalog_graph("rose(2)")
        expected = len(brute_force_paths(g, 1, "p")) + len(brute_force_paths(g, 2, "p"))
        assert expected == 16
        assert len(list(enumerate_reduced_paths(g, "p", 2))) == 16

    @pytest.mark.parametrize("name", CATALOG)
    @pytest.mark.parametrize("t", [1, 2, 3, 4])
    def test_matches_brute_force_exactly(self, name, t):
        g = catalog_graph(name)
        v = g.vertices[0]
        got = [p.edges for p in enumerate_reduced_paths(g, v, t) if len(p) == t]
        assert got == sorted(brute_force_paths(g, t, v))

    @pytest.mark.parametrize("name", CATALOG)
    def test_counts_match_line_graph_powers(self, name):
        g = catalog_graph(name)
        v = g.vertices[0]
        M = g.adjacency()
        start = np.array([1.0 if g.origin(e) == v else 0.0 for e in g.edges])
        paths = list(enumerate_reduced_paths(g, v, 6))
        for t in range(1, 7):
            count = sum(1 for p in paths if len(p) == t)
            assert count == round(start @ np.linalg.matrix_power(M, t - 1) @ np.ones(g.n))

    def test_ordering(self):
        g = catalog_graph("theta")
        paths = [p.edges for p in enumerate_reduced_paths(g, "u", 3)]
        keys = [(len(p), p) for p in paths]
        assert keys == sorted(keys)
        assert len(set(paths)) == len(paths)

    def test_no_backtracks(self):
        g = catalog_graph("dumbbell")
        for p in enumerate_reduced_paths(g, "u", 5):
            for e, f in zip(p.edges, p.edges[1:]):
                assert f != g.inverse(e)

    def test_bad_horizon(self):
        with pytest.raises(ValueError):
            list(enumerate_reduced_paths(catalog_graph("theta"), "u", 0))


class TestPaths:
    def test_backtrack_rejected(self):
        with pytest.raises(PathError):
            path(catalog_graph("theta"), "a+ a-")

    def test_non_consecutive_rejected(self):
        with pytest.raises(PathError):
            path(catalog_graph("theta"), "a+ b+")

    def test_metric_length_and_counts(self):
        g, m = catalog("rose(2)", [0.3, 0.7])
        p = path(g, "g1+ g1+ g2-")
        assert p.metric_length(m) == pytest.approx(1.3)
        counts = p.occurrence_counts()
        assert counts["g1+"] == 2 and counts["g2-"] == 1 and counts["g2+"] == 0


class TestTranslationLength:
    def test_theta_simple_loop(self):
        g, m = catalog("theta")
        assert translation_length(m, path(g, "a+ b-")) == pytest.approx(2 / 3)

    def test_conjugated_loop(self):
        g, m = catalog("theta")
        assert translation_length(m, path(g, "c- a+ b- c+")) == pytest.approx(2 / 3)

    def test_rose(self):
        g, m = catalog("rose(2)", [0.3, 0.7])
        assert translation_length(m, path(g, "g2+ g1+")) == pytest.approx(1.0)

    def test_open_path_rejected(self):
        g, m = catalog("theta")
        with pytest.raises(PathError):
            translation_length(m, path(g, "a+"))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.sampled_from(["g1+", "g1-", "g2+", "g2-"]), min_size=1, max_size=8), st.integers(0, 7))
    def test_cyclic_permutation_invariant(self, word, shift):
        g, m = catalog("rose(2)", [0.3, 0.7])
        # keep only cyclically reduced words
        ok = all(f != g.inverse(e) for e, f in zip(word, word[1:] + word[:1])) or len(word) == 1
        if not ok:
            return
        shift %= len(word)
        rotated = word[shift:] + word[:shift]
        assert translation_length(m, path(g, rotated)) == pytest.approx(translation_length(m, path(g, word)))
