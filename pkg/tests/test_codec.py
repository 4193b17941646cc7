"""
Unit Tests for Codec Module
"""

import unittest
import sys
import os
import tempfile
from pathlib import Path

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'app'))

from circle import ChordDiagram
from codec import (
    load,
    parse_constellation,
    parse_diagram,
    parse_graph,
    parse_trace,
    save,
    serialize,
    serialize_constellation,
)
from constellation import Augmentation, Constellation
from errors import InvalidOperation, ParseError
from fixtures import case_one_fixture, matching_fixture
from graph_core import OrderedGraph, StepKind


class TestGraphFormat(unittest.TestCase):
    """Test .ogr parsing and its error positions"""

    def test_parse_path(self):
        self.assertEqual(parse_graph("3\n010\n101\n010\n"), OrderedGraph.path(3))

    def test_comments_and_blank_lines(self):
        self.assertEqual(parse_graph("# edge\n\n2\n01\n10\n"), OrderedGraph.complete(2))

    def test_asymmetric_entry(self):
        with self.assertRaises(ParseError) as ctx:
            parse_graph("2\n01\n00\n", source="g.ogr")
        self.assertEqual((ctx.exception.line, ctx.exception.col), (2, 2))
        self.assertEqual(ctx.exception.source, "g.ogr")

    def test_bad_character(self):
        with self.assertRaises(ParseError) as ctx:
            parse_graph("2\n0x\n10\n")
        self.assertEqual((ctx.exception.line, ctx.exception.col), (2, 2))

    def test_missing_row(self):
        with self.assertRaises(ParseError) as ctx:
            parse_graph("3\n010\n101\n")
        self.assertEqual(ctx.exception.line, 4)

    def test_loop(self):
        with self.assertRaises(ParseError) as ctx:
            parse_graph("2\n11\n10\n")
        self.assertEqual((ctx.exception.line, ctx.exception.col), (2, 1))

    def test_header_not_an_integer(self):
        with self.assertRaises(ParseError) as ctx:
            parse_graph("abc\n")
        self.assertEqual(ctx.exception.line, 1)
        self.assertEqual(ctx.exception.kind, "parse")


class TestTraceFormat(unittest.TestCase):
    """Test .trc parsing"""

    def test_all_step_kinds(self):
        trace = parse_trace("LC 0\npiv 1 2\nDEL 3\nKEEP 1 0\n")
        self.assertEqual([step.kind for step in trace], [StepKind.LC, StepKind.PIV, StepKind.DEL, StepKind.KEEP])
        self.assertEqual(serialize(trace), "LC 0\nPIV 1 2\nDEL 3\nKEEP 0 1\n")

    def test_errors(self):
        for text in ("FOO 1\n", "PIV 1\n", "PIV 1 1\n", "KEEP 2 2\n", "LC -1\n", "LC 0\nDEL x\n"):
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    parse_trace(text)

    def test_error_line_number(self):
        with self.assertRaises(ParseError) as ctx:
            parse_trace("LC 0\n# skip\nDEL x\n")
        self.assertEqual((ctx.exception.line, ctx.exception.col), (3, 5))


class TestDiagramFormat(unittest.TestCase):
    """Test .cwd parsing"""

    def test_parse(self):
        self.assertEqual(parse_diagram("1 2 1 2\n"), ChordDiagram(["1", "2", "1", "2"]))

    def test_chord_seen_once(self):
        with self.assertRaises(ParseError):
            parse_diagram("1 2 1\n")

    def test_two_lines(self):
        with self.assertRaises(ParseError) as ctx:
            parse_diagram("1 1\n2 2\n")
        self.assertEqual(ctx.exception.line, 2)


class TestConstellationFormat(unittest.TestCase):
    """Test .cst parsing"""

    def test_constellation(self):
        text = "2 0 1\nH 0 1\nK 0 1\nW 0 2\nW 1 3\nE 0 1\n"
        C = parse_constellation(text)
        self.assertIsInstance(C, Constellation)
        self.assertEqual(C, matching_fixture(2, k=1)[1])

    def test_augmentation_text(self):
        _, aug = case_one_fixture()
        text = serialize_constellation(aug)
        self.assertIn("AUG 0 2\n", text)
        parsed = parse_constellation(text)
        self.assertIsInstance(parsed, Augmentation)
        self.assertEqual(parsed, aug)

    def test_header_mismatch(self):
        with self.assertRaises(ParseError):
            parse_constellation("2 0 2\nH 0 1\nK 0 1\nW 0 2\nW 1 3\nE 0 1\n")

    def test_structural_errors(self):
        for text in (
            "2 0 1\nH 0 1\nK 0 1\nW 0 2\nE 0 1\n",
            "1 0 1\nH 0\nK 0\nW 0 1\nZ 4\n",
            "1 0 1\nH 0\nK 0\nW 0 1\nX1 3\n",
            "1 0 1\nW 0 1\n",
        ):
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    parse_constellation(text)


class TestFiles(unittest.TestCase):
    """Test load and save by extension"""

    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = save(Path(tmp) / "nested" / "c5.ogr", OrderedGraph.cycle(5))
            self.assertEqual(load(path), OrderedGraph.cycle(5))

    def test_unknown_extension(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "g.txt"
            path.write_text("1\n0\n")
            with self.assertRaises(ParseError):
                load(path)

    def test_serialize_rejects_other_objects(self):
        with self.assertRaises(InvalidOperation):
            serialize(42)


if __name__ == '__main__':
    unittest.main()
