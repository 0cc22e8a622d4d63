"""
Readers and writers of instance files: OR-Library set covering files, DIMACS edge lists (read as vertex covering
instances) and the native QSP text format. The grammars are documented in datasets/README.md.
"""
import logging
import os

import networkx as nx
import numpy as np

from core.model import Instance, Sense

NATIVE_MAGIC = 'QSP'

logger = logging.getLogger(__name__)


class ParseError(ValueError):
    """
    A syntax or consistency error in an instance file, with the 1-based number of the offending line.
    """

    def __init__(self, message, line):
        super().__init__("line {}: {}".format(line, message))
        self.line = line


def _tokens(text):
    """
    Split a text into (token, line number) pairs.
    """
    for line_no, line in enumerate(text.splitlines(), start=1):
        for token in line.split():
            yield token, line_no


def _eof_line(text):
    return len(text.splitlines()) + 1


def _number(token, line_no, what):
    try:
        return float(token)
    except ValueError:
        raise ParseError("expected a number for {}, got '{}'".format(what, token), line_no) from None


def _integer(token, line_no, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError("expected an integer for {}, got '{}'".format(what, token), line_no) from None


class _TokenStream:
    def __init__(self, text):
        self.tokens = _tokens(text)
        self.eof_line = _eof_line(text)
        self.line = 1

    def next(self, what):
        try:
            token, self.line = next(self.tokens)
        except StopIteration:
            raise ParseError("unexpected end of file, expected {}".format(what), self.eof_line) from None
        return token

    def next_int(self, what):
        return _integer(self.next(what), self.line, what)

    def next_number(self, what):
        return _number(self.next(what), self.line, what)

    def remaining(self):
        return next(self.tokens, None)


def parse_orlib_scp(text, name=''):
    """
    Parse an OR-Library set covering file: "m n", the n column costs, then for each row the number k of columns
    covering it followed by their k 1-based indices.

    :param text: The file content.
    :param name: The instance name.
    :return: A covering Instance with D = 0.
    """
    stream = _TokenStream(text)
    m = stream.next_int('the number of rows')
    n = stream.next_int('the number of columns')
    if m < 1 or n < 1:
        raise ParseError("the dimensions must be positive, got m={} and n={}".format(m, n), stream.line)
    c = np.array([stream.next_number('the cost of column {}'.format(j + 1)) for j in range(n)])
    A = np.zeros((m, n), dtype=np.int8)
    for i in range(m):
        k = stream.next_int('the column count of row {}'.format(i + 1))
        if k < 1:
            raise ParseError("row {} is covered by no column".format(i + 1), stream.line)
        for _ in range(k):
            j = stream.next_int('a column index of row {}'.format(i + 1))
            if not 1 <= j <= n:
                raise ParseError("column index {} out of range 1..{}".format(j, n), stream.line)
            A[i, j - 1] = 1
    extra = stream.remaining()
    if extra is not None:
        raise ParseError("unexpected trailing data '{}'".format(extra[0]), extra[1])
    return Instance(A, c, np.zeros((n, n)), sense=Sense.COVER, name=name)


def parse_dimacs_graph(text):
    """
    Parse a DIMACS edge file ("c" comments, one "p edge n m" header, "e u v" edges with 1-based endpoints).

    :param text: The file content.
    :return: The networkx Graph on the nodes 1..n.
    """
    graph = None
    declared_edges = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        entries = line.split()
        if not entries or entries[0] == 'c':
            continue
        if entries[0] == 'p':
            if graph is not None:
                raise ParseError("duplicate problem line", line_no)
            if len(entries) != 4 or entries[1] not in ('edge', 'col'):
                raise ParseError("malformed problem line, expected 'p edge <n> <m>'", line_no)
            n = _integer(entries[2], line_no, 'the number of vertices')
            declared_edges = _integer(entries[3], line_no, 'the number of edges')
            if n < 1:
                raise ParseError("the number of vertices must be positive, got {}".format(n), line_no)
            graph = nx.Graph()
            graph.add_nodes_from(range(1, n + 1))
        elif entries[0] == 'e':
            if graph is None:
                raise ParseError("edge before the problem line", line_no)
            if len(entries) != 3:
                raise ParseError("malformed edge line, expected 'e <u> <v>'", line_no)
            u = _integer(entries[1], line_no, 'an endpoint')
            v = _integer(entries[2], line_no, 'an endpoint')
            for endpoint in (u, v):
                if not 1 <= endpoint <= graph.number_of_nodes():
                    raise ParseError("endpoint {} out of range 1..{}".format(endpoint, graph.number_of_nodes()),
                                     line_no)
            if u == v:
                raise ParseError("self-loop on vertex {}".format(u), line_no)
            graph.add_edge(u, v)
        else:
            raise ParseError("unknown line type '{}'".format(entries[0]), line_no)
    if graph is None:
        raise ParseError("missing problem line", _eof_line(text))
    if graph.number_of_edges() != declared_edges:
        logger.warning("Declared %d edges, read %d distinct edges", declared_edges, graph.number_of_edges())
    return graph


def parse_dimacs_vertex_cover(text, name=''):
    """
    Read a DIMACS edge file as a vertex covering instance: one row per distinct edge (sorted by endpoints), one
    column per vertex, unit linear costs and D = 0.

    :param text: The file content.
    :param name: The instance name.
    :return: A covering Instance.
    """
    graph = parse_dimacs_graph(text)
    if graph.number_of_edges() == 0:
        raise ParseError("the graph has no edges", _eof_line(text))
    n = graph.number_of_nodes()
    edges = sorted(tuple(sorted(edge)) for edge in graph.edges())
    A = np.zeros((len(edges), n), dtype=np.int8)
    for i, (u, v) in enumerate(edges):
        A[i, [u - 1, v - 1]] = 1
    return Instance(A, np.ones(n), np.zeros((n, n)), sense=Sense.COVER, name=name)


def format_number(value):
    """
    Render integral values without a decimal point and other values with their shortest exact representation.
    """
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def write_native(inst):
    """
    Serialize an instance in the native QSP text format.

    :param inst: The instance.
    :return: The text.
    """
    lines = ['{} {} {} {}'.format(NATIVE_MAGIC, inst.m, inst.n, inst.sense.value),
             ' '.join(['c:'] + [format_number(v) for v in inst.c])]
    lines.extend(' '.join(str(int(a)) for a in row) for row in inst.A)
    lines.extend(' '.join(format_number(v) for v in row) for row in inst.D)
    return '\n'.join(lines) + '\n'


def read_native(text, name=''):
    """
    Parse the native QSP text format. Blank lines and lines starting with '#' are ignored.

    :param text: The file content.
    :param name: The instance name.
    :return: The Instance.
    """
    lines = ((line_no, line.split()) for line_no, line in enumerate(text.splitlines(), start=1)
             if line.strip() and not line.lstrip().startswith('#'))
    eof_line = _eof_line(text)

    def next_line(what):
        try:
            return next(lines)
        except StopIteration:
            raise ParseError("unexpected end of file, expected {}".format(what), eof_line) from None

    # Header
    line_no, entries = next_line('the header')
    if len(entries) != 4 or entries[0] != NATIVE_MAGIC:
        raise ParseError("malformed header, expected '{} <m> <n> <cover|pack>'".format(NATIVE_MAGIC), line_no)
    m = _integer(entries[1], line_no, 'm')
    n = _integer(entries[2], line_no, 'n')
    if m < 1 or n < 1:
        raise ParseError("the dimensions must be positive, got m={} and n={}".format(m, n), line_no)
    try:
        sense = Sense(entries[3])
    except ValueError:
        raise ParseError("unknown sense '{}', expected cover or pack".format(entries[3]), line_no) from None

    # Linear costs
    line_no, entries = next_line('the linear costs')
    if entries[0] != 'c:':
        raise ParseError("expected the linear costs line starting with 'c:'", line_no)
    if len(entries) - 1 != n:
        raise ParseError("expected {} linear costs, got {}".format(n, len(entries) - 1), line_no)
    c = [_number(token, line_no, 'a linear cost') for token in entries[1:]]

    # Incidence matrix
    A = np.zeros((m, n), dtype=np.int8)
    for i in range(m):
        line_no, entries = next_line('row {} of A'.format(i + 1))
        if len(entries) != n:
            raise ParseError("row {} of A has {} entries, expected {}".format(i + 1, len(entries), n), line_no)
        for j, token in enumerate(entries):
            if token not in ('0', '1'):
                raise ParseError("entries of A must be 0 or 1, got '{}'".format(token), line_no)
            A[i, j] = int(token)
        if sense is Sense.COVER and not A[i].any():
            raise ParseError("row {} of A has no 1 entries, no cover exists".format(i + 1), line_no)

    # Quadratic costs
    D = np.zeros((n, n))
    for i in range(n):
        line_no, entries = next_line('row {} of D'.format(i + 1))
        if len(entries) != n:
            raise ParseError("row {} of D has {} entries, expected {}".format(i + 1, len(entries), n), line_no)
        D[i] = [_number(token, line_no, 'a quadratic cost') for token in entries]

    extra = next(lines, None)
    if extra is not None:
        raise ParseError("unexpected trailing data", extra[0])
    return Instance(A, c, D, sense=sense, name=name)


def load_native(path):
    """
    Read a native instance file, naming the instance after the file.
    """
    with open(path, 'r') as instance_file:
        text = instance_file.read()
    return read_native(text, name=os.path.splitext(os.path.basename(path))[0])


def save_native(inst, path):
    with open(path, 'w') as instance_file:
        instance_file.write(write_native(inst))


READERS = {
    'orlib': parse_orlib_scp,
    'dimacs': parse_dimacs_vertex_cover,
    'native': read_native
}
