"""Text format for belief networks, evidence strings, and the bundled nets.

Network documents (extension ``.bn``) are token streams:

    document    := "network" IDENT block*
    block       := nodedecl | parentsdecl | cptdecl
    nodedecl    := "node" IDENT "{" "outcomes" ":" IDENT ("," IDENT)+ "}"
    parentsdecl := "parents" IDENT ":" IDENT ("," IDENT)*
    cptdecl     := "cpt" IDENT ":" NUMBER+

``#`` starts a comment running to end of line; whitespace only separates
tokens. A cpt block's numbers are reshaped into rows of one entry per
outcome, with one row per combination of parent outcomes, the last declared
parent varying fastest. Rows must sum to 1 within 1e-9 and are renormalized
on load (see :func:`bnras.network.normalize_rows`). Probabilities may use
scientific notation and are read as 64-bit floats.

Evidence strings are ``Name=outcome`` pairs separated by commas; the empty
string means no evidence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import CycleError, NetworkFormatError
from .network import (
    BeliefNetwork,
    Cpt,
    Evidence,
    Node,
    normalize_rows,
    topological_order,
    validate_network,
)

_BUILTIN_FILES = {
    "AB": "ab.bn",
    "PATH2": "path2.bn",
    "CHAIN5": "chain5.bn",
    "MINIALARM": "minialarm.bn",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}:,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "ident" | "punct" | "eof"
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


@dataclass
class NetworkDocument:
    """Parse result: the source, the resolved network (if any), and
    location-tagged diagnostics."""

    source: str
    network: BeliefNetwork | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.network is not None and not self.diagnostics


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise NetworkFormatError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise NetworkFormatError(message, tok.line, tok.column)

    def expect_ident(self, what: str) -> Token:
        tok = self.take()
        if tok.kind != "ident":
            self.fail(f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}", tok)
        return tok

    def expect_punct(self, char: str) -> Token:
        tok = self.take()
        if tok.kind != "punct" or tok.text != char:
            self.fail(f"expected {char!r}, found {tok.text!r}" if tok.text else f"expected {char!r}", tok)
        return tok

    def parse(self) -> BeliefNetwork:
        head = self.take()
        if head.kind == "eof":
            self.fail("no network declared", head)
        if head.kind != "ident" or head.text != "network":
            self.fail(f"expected 'network', found {head.text!r}", head)
        name = self.expect_ident("network name").text

        # declaration order, then two-phase resolution so block order is free
        node_decls: list[tuple[Token, str, list[str]]] = []
        parent_decls: dict[str, tuple[Token, list[str]]] = {}
        cpt_decls: dict[str, tuple[Token, list[float]]] = {}

        while True:
            tok = self.take()
            if tok.kind == "eof":
                break
            if tok.kind != "ident" or tok.text not in ("node", "parents", "cpt"):
                self.fail(f"expected 'node', 'parents' or 'cpt', found {tok.text!r}", tok)
            if tok.text == "node":
                name_tok = self.expect_ident("node name")
                self.expect_punct("{")
                key = self.expect_ident("'outcomes'")
                if key.text != "outcomes":
                    self.fail(f"expected 'outcomes', found {key.text!r}", key)
                self.expect_punct(":")
                outcomes = [self.expect_ident("outcome label").text]
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.take()
                    outcomes.append(self.expect_ident("outcome label").text)
                self.expect_punct("}")
                if len(outcomes) < 2:
                    self.fail(f"node {name_tok.text}: needs at least 2 outcomes", name_tok)
                node_decls.append((name_tok, name_tok.text, outcomes))
            elif tok.text == "parents":
                name_tok = self.expect_ident("node name")
                self.expect_punct(":")
                plist = [self.expect_ident("parent name").text]
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.take()
                    plist.append(self.expect_ident("parent name").text)
                if name_tok.text in parent_decls:
                    self.fail(f"duplicate parents declaration for {name_tok.text}", name_tok)
                parent_decls[name_tok.text] = (name_tok, plist)
            else:  # cpt
                name_tok = self.expect_ident("node name")
                self.expect_punct(":")
                numbers = []
                while self.peek().kind == "number":
                    numbers.append(float(self.take().text))
                if not numbers:
                    self.fail(f"cpt {name_tok.text}: expected at least one probability")
                if name_tok.text in cpt_decls:
                    self.fail(f"duplicate cpt declaration for {name_tok.text}", name_tok)
                cpt_decls[name_tok.text] = (name_tok, numbers)

        return self.resolve(name, node_decls, parent_decls, cpt_decls)

    def resolve(self, name, node_decls, parent_decls, cpt_decls) -> BeliefNetwork:
        declared: dict[str, tuple[Token, list[str]]] = {}
        for name_tok, node_name, outcomes in node_decls:
            if node_name in declared:
                self.fail(f"duplicate node {node_name}", name_tok)
            if len(set(outcomes)) != len(outcomes):
                self.fail(f"node {node_name}: duplicate outcome labels", name_tok)
            declared[node_name] = (name_tok, outcomes)

        for node_name, (tok, plist) in parent_decls.items():
            if node_name not in declared:
                self.fail(f"parents declared for unknown node {node_name}", tok)
            for p in plist:
                if p not in declared:
                    self.fail(f"node {node_name}: unknown parent {p}", tok)
            if len(set(plist)) != len(plist):
                self.fail(f"node {node_name}: repeated parent", tok)
        for node_name, (tok, _) in cpt_decls.items():
            if node_name not in declared:
                self.fail(f"cpt declared for unknown node {node_name}", tok)

        nodes = []
        for name_tok, node_name, outcomes in node_decls:
            plist = parent_decls.get(node_name, (None, []))[1]
            if node_name not in cpt_decls:
                self.fail(f"node {node_name}: no cpt declared", name_tok)
            cpt_tok, numbers = cpt_decls[node_name]
            k = len(outcomes)
            expected_rows = 1
            for p in plist:
                expected_rows *= len(declared[p][1])
            if len(numbers) != expected_rows * k:
                self.fail(
                    f"cpt {node_name}: {len(numbers)} probabilities, "
                    f"expected {expected_rows} rows of {k}",
                    cpt_tok,
                )
            if any(not (0.0 <= x <= 1.0) for x in numbers):
                self.fail(f"cpt {node_name}: probability outside [0, 1]", cpt_tok)
            raw_rows = [numbers[r * k : (r + 1) * k] for r in range(expected_rows)]
            try:
                rows = normalize_rows(raw_rows)
            except ValueError as exc:
                self.fail(f"cpt {node_name}: {exc}", cpt_tok)
            nodes.append(Node(node_name, tuple(outcomes), tuple(plist), Cpt(rows)))

        net = BeliefNetwork(name, tuple(nodes))
        try:
            topological_order(net)
        except CycleError:
            first = next(iter(parent_decls.values()))[0] if parent_decls else self.tokens[0]
            self.fail("parent relation contains a cycle", first)
        return net


def parse_network(text: str) -> BeliefNetwork:
    """Parse a network document; raises NetworkFormatError with a location
    on the first syntactic or semantic problem."""
    return _Parser(text).parse()


def parse_document(text: str) -> NetworkDocument:
    """Like :func:`parse_network` but never raises: problems come back as
    diagnostics, which makes this safe to run on arbitrary bytes."""
    try:
        net = parse_network(text)
    except NetworkFormatError as exc:
        return NetworkDocument(
            source=text,
            network=None,
            diagnostics=[Diagnostic(exc.line or 1, exc.column or 1, str(exc))],
        )
    return NetworkDocument(source=text, network=net, diagnostics=[])


def _fmt(p: float) -> str:
    return f"{p:.17g}"


def serialize_network(net: BeliefNetwork) -> str:
    """Canonical document for a network: one node block per node in
    declaration order, probabilities printed with 17 significant digits so
    parsing the output reproduces the network exactly."""
    lines = [f"network {net.name}"]
    for nd in net.nodes:
        lines.append("")
        lines.append(f"node {nd.name} {{ outcomes: {', '.join(nd.outcomes)} }}")
        if nd.parents:
            lines.append(f"parents {nd.name}: {', '.join(nd.parents)}")
        lines.append(f"cpt {nd.name}:")
        for row in nd.cpt.rows:
            lines.append("  " + " ".join(_fmt(p) for p in row))
    lines.append("")
    return "\n".join(lines)


def parse_evidence(spec: str, net: BeliefNetwork) -> Evidence:
    """Resolve a ``Name=outcome(,Name=outcome)*`` string against a network."""
    assignments: dict[str, int] = {}
    text = spec.strip()
    if not text:
        return Evidence({})
    for part in text.split(","):
        part = part.strip()
        if "=" not in part:
            raise NetworkFormatError(f"evidence item {part!r} is not Name=outcome")
        name, _, label = part.partition("=")
        name, label = name.strip(), label.strip()
        if name not in net.node_index:
            raise NetworkFormatError(f"evidence names unknown node {name!r}")
        if name in assignments:
            raise NetworkFormatError(f"evidence assigns node {name} twice")
        nd = net.node(name)
        if label not in nd.outcomes:
            raise NetworkFormatError(
                f"node {name} has no outcome {label!r} (has: {', '.join(nd.outcomes)})"
            )
        assignments[name] = nd.outcome_index(label)
    return Evidence(assignments)


def format_evidence(ev: Evidence, net: BeliefNetwork) -> str:
    """Canonical evidence string, nodes in declaration order."""
    parts = []
    for nd in net.nodes:
        if nd.name in ev:
            parts.append(f"{nd.name}={nd.outcomes[ev.get(nd.name)]}")
    return ",".join(parts)


@lru_cache(maxsize=1)
def builtin_networks() -> dict[str, BeliefNetwork]:
    """The bundled demonstration networks, parsed from package data.

    AB and PATH2 are two-node chains (PATH2 with near-deterministic
    coupling, the classic hard case for cyclic-scan simulation), CHAIN5 is
    a five-node chain, and MINIALARM is an eight-node multiply connected
    monitoring model. All pass validation with strictly positive tables.
    """
    catalog: dict[str, BeliefNetwork] = {}
    for name, filename in _BUILTIN_FILES.items():
        text = resources.files(__package__).joinpath(f"data/{filename}").read_text()
        net = parse_network(text)
        report = validate_network(net)
        if not report.ok:
            raise RuntimeError(f"bundled network {name} is invalid: {report.issues}")
        catalog[name] = net
    return catalog
