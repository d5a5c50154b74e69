"""Group-spec text format and built-in specs.

Grammar (line oriented, '#' starts a comment, blank lines ignored):

    rank <m>
    <i> <j> <label>        # one line per unordered generator pair, 1-based

with <label> one of: an integer >= 2, ``inf`` (tangent walls), or
``inf:ultra:<t>`` (ultra-parallel walls at distance t > 0).  Every unordered
pair must be covered exactly once.
"""

import math
import os

from .coxeter import CoxeterSpec
from .errors import SpecError

BUILTIN_SPECS = {
    "tri-2-3-inf": """\
# triangle group with labels 2, 3, inf; the inf-labeled walls are tangent,
# so the chamber has one ideal vertex
rank 3
1 2 2
1 3 3
2 3 inf
""",
    "tri-3-4-4": """\
# compact triangle group with labels 3, 4, 4
rank 3
1 2 3
1 3 4
2 3 4
""",
    "universal-3-ultra1": """\
# all products of distinct generators have infinite order; walls realized
# pairwise ultra-parallel at distance 1 (chamber is not a polytope)
rank 3
1 2 inf:ultra:1
1 3 inf:ultra:1
2 3 inf:ultra:1
""",
}


def parse_spec_text(text):
    """Parse the group-spec grammar into a CoxeterSpec."""
    rank = None
    entries = {}
    ultra = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if rank is None:
            if len(fields) != 2 or fields[0] != "rank":
                raise SpecError("expected 'rank <m>'", lineno)
            try:
                rank = int(fields[1])
            except ValueError:
                raise SpecError("rank is not an integer", lineno) from None
            if rank < 2:
                raise SpecError("rank must be >= 2", lineno)
            continue
        if len(fields) != 3:
            raise SpecError("expected '<i> <j> <label>'", lineno)
        try:
            i, j = int(fields[0]) - 1, int(fields[1]) - 1
        except ValueError:
            raise SpecError("generator indices are not integers", lineno) from None
        if not (0 <= i < rank and 0 <= j < rank) or i == j:
            raise SpecError("generator pair out of range", lineno)
        key = (min(i, j), max(i, j))
        if key in entries:
            raise SpecError("duplicate pair {} {}".format(key[0] + 1, key[1] + 1), lineno)
        label = fields[2]
        if label == "inf":
            entries[key] = math.inf
        elif label.startswith("inf:ultra:"):
            try:
                t = float(label.split(":", 2)[2])
            except ValueError:
                raise SpecError("bad ultra distance in {!r}".format(label), lineno) from None
            if not t > 0:
                raise SpecError("ultra distance must be > 0", lineno)
            entries[key] = math.inf
            ultra[key] = t
        else:
            try:
                m = int(label)
            except ValueError:
                raise SpecError("bad label {!r}".format(label), lineno) from None
            if m < 2:
                raise SpecError("finite labels must be >= 2", lineno)
            entries[key] = m
    if rank is None:
        raise SpecError("empty spec: missing 'rank <m>' line")
    missing = [(i + 1, j + 1) for i in range(rank) for j in range(i + 1, rank)
               if (i, j) not in entries]
    if missing:
        raise SpecError("missing labels for pairs {}".format(missing))
    try:
        return CoxeterSpec.from_labels(rank, entries, ultra)
    except Exception as exc:
        raise SpecError(str(exc)) from None


def load_spec(name_or_path):
    """Resolve a builtin spec name or read a spec file from disk."""
    if name_or_path in BUILTIN_SPECS:
        return parse_spec_text(BUILTIN_SPECS[name_or_path])
    if not os.path.exists(name_or_path):
        raise SpecError("no builtin spec or file named {!r} (builtins: {})".format(
            name_or_path, ", ".join(sorted(BUILTIN_SPECS))))
    with open(name_or_path, "r", encoding="utf-8") as fh:
        return parse_spec_text(fh.read())
