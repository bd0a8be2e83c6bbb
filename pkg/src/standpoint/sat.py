"""Tseitin clausification, a DPLL solver and DIMACS interchange.

The solver is deliberately plain: two watched literals, unit propagation,
pure-literal elimination on the initial clause set, first-unassigned
branching (false first, clausification variables before the rest) and conflict-directed backjumping.  No clause
learning, no restarts.  Every SAT answer is re-checked clause by clause before it is
returned.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .prop import Lit, PAnd, PConst, PImplies, PNot, POr, prop_atoms, prop_eval

AUX_PREFIX = "_t"
DEFAULT_DECISION_BUDGET = 10_000_000


class SolverBudgetError(RuntimeError):
    pass


class DimacsError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """Clauses over variables ``1..num_vars``; ``names`` is informational."""
    num_vars: int
    clauses: tuple
    names: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} is outside 1..{self.num_vars}")

    def variable(self, name) -> int | None:
        for i, n in self.names.items():
            if n == name:
                return i
        return None


# -- clausification --------------------------------------------------------------

class _Tseitin:
    def __init__(self):
        self.names: dict = {}
        self.ids: dict = {}
        self.clauses: list = []
        self.memo: dict = {}
        self.aux = 0

    def var(self, atom) -> int:
        if atom not in self.ids:
            self.ids[atom] = len(self.ids) + 1
            self.names[self.ids[atom]] = atom
        return self.ids[atom]

    def fresh(self) -> int:
        self.aux += 1
        return self.var(f"{AUX_PREFIX}{self.aux}")

    def lit(self, g):
        """A literal equivalent to ``g``, or a Python bool for constants."""
        if isinstance(g, PConst):
            return g.value
        if isinstance(g, Lit):
            return self.var(g.atom)
        if isinstance(g, PNot):
            a = self.lit(g.arg)
            return (not a) if isinstance(a, bool) else -a
        if g in self.memo:
            return self.memo[g]
        if isinstance(g, PImplies):
            a, b = self.lit(g.left), self.lit(g.right)
            r = self._or([(not a) if isinstance(a, bool) else -a, b])
        elif isinstance(g, PAnd):
            r = self._and([self.lit(a) for a in g.args])
        elif isinstance(g, POr):
            r = self._or([self.lit(a) for a in g.args])
        else:
            raise TypeError(f"not a propositional formula: {g!r}")
        self.memo[g] = r
        return r

    def _and(self, lits):
        if any(a is False for a in lits):
            return False
        lits = [a for a in lits if a is not True]
        if not lits:
            return True
        if len(lits) == 1:
            return lits[0]
        x = self.fresh()
        for a in lits:
            self.clauses.append((-x, a))
        self.clauses.append((x, *(-a for a in lits)))
        return x

    def _or(self, lits):
        if any(a is True for a in lits):
            return True
        lits = [a for a in lits if a is not False]
        if not lits:
            return False
        if len(lits) == 1:
            return lits[0]
        x = self.fresh()
        for a in lits:
            self.clauses.append((x, -a))
        self.clauses.append((-x, *lits))
        return x

    def assert_(self, g):
        # top-level conjunctions and disjunctions need no auxiliary variable
        if isinstance(g, PAnd):
            for a in g.args:
                self.assert_(a)
            return
        if isinstance(g, POr):
            lits = [self.lit(a) for a in g.args]
        elif isinstance(g, PImplies):
            a = self.lit(g.left)
            lits = [(not a) if isinstance(a, bool) else -a, self.lit(g.right)]
        else:
            lits = [self.lit(g)]
        if any(a is True for a in lits):
            return
        self.clauses.append(tuple(a for a in lits if a is not False))


def _branch_key(atom):
    # generated names (leading underscore) after user symbols: the solver
    # branches in index order, and generated symbols mostly follow by propagation
    text = str(atom)
    return (text.startswith("_"), text)


def to_cnf(f) -> CnfFormula:
    """Equisatisfiable CNF; original atoms are numbered before auxiliaries."""
    t = _Tseitin()
    for atom in sorted(prop_atoms(f), key=_branch_key):
        t.var(atom)
    t.assert_(f)
    return CnfFormula(len(t.ids), tuple(t.clauses), dict(t.names))


# -- DPLL ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    satisfiable: bool
    assignment: dict | None      # variable index -> bool, total when SAT
    decisions: int

    def __bool__(self):
        return self.satisfiable


class Solver:
    """One search per instance; the trail and watch lists are mutable.

    Backtracking is conflict-directed: every implied literal remembers the
    clause that forced it, a conflict is traced back to the set of decision
    levels responsible, and the search returns straight to the deepest of
    them.  Nothing is learned; the only memory of a refuted branch is the
    level set attached to the flipped decision.
    """

    def __init__(self, cnf: CnfFormula, budget: int = DEFAULT_DECISION_BUDGET):
        self.cnf = cnf
        self.budget = budget
        self.n = cnf.num_vars
        self.values: list = [None] * (self.n + 1)
        self.level: list = [0] * (self.n + 1)
        # None: decision; int: forcing clause; frozenset: levels refuting the other branch
        self.reason: list = [None] * (self.n + 1)
        self.trail: list = []
        self.levels: list = []          # per decision level: (trail length, literal, refutation)
        self.qhead = 0
        self.watches: dict = {}
        self.clauses: list = []
        self.decisions = 0
        self.order = branch_order(cnf)

    def value(self, lit):
        v = self.values[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def assign(self, lit, reason=None) -> bool:
        v = self.value(lit)
        if v is not None:
            return v
        var = abs(lit)
        self.values[var] = lit > 0
        self.level[var] = len(self.levels)
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    def _setup(self) -> bool:
        units = []
        occurs: set = set()
        for clause in self.cnf.clauses:
            lits = list(dict.fromkeys(clause))
            if any(-a in lits for a in lits):
                continue
            if not lits:
                return False
            occurs.update(lits)
            if len(lits) == 1:
                units.append(lits[0])
            else:
                idx = len(self.clauses)
                self.clauses.append(lits)
                self.watches.setdefault(lits[0], []).append(idx)
                self.watches.setdefault(lits[1], []).append(idx)
        # pure literals are fixed once, on the original clause set
        for lit in sorted(occurs, key=abs):
            if -lit not in occurs:
                self.assign(lit)
        return all(self.assign(u) for u in units)

    def propagate(self):
        """Unit propagation; returns the index of a falsified clause or None."""
        while self.qhead < len(self.trail):
            false_lit = -self.trail[self.qhead]
            self.qhead += 1
            watching = self.watches.get(false_lit, [])
            kept = []
            for pos, c in enumerate(watching):
                clause = self.clauses[c]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self.value(clause[0]) is True:
                    kept.append(c)
                    continue
                for k in range(2, len(clause)):
                    if self.value(clause[k]) is not False:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches.setdefault(clause[1], []).append(c)
                        break
                else:
                    kept.append(c)
                    if self.value(clause[0]) is False:
                        kept.extend(watching[pos + 1:])
                        self.watches[false_lit] = kept
                        return c
                    self.assign(clause[0], c)
            self.watches[false_lit] = kept
        return None

    def conflict_levels(self, clause) -> set:
        """Decision levels that together force ``clause`` to be false."""
        found: set = set()
        seen: set = set()
        stack = [abs(a) for a in clause]
        while stack:
            var = stack.pop()
            if var in seen or self.level[var] == 0:
                continue
            seen.add(var)
            why = self.reason[var]
            if why is None:
                found.add(self.level[var])
            elif isinstance(why, frozenset):
                found |= why
            else:
                stack.extend(abs(a) for a in self.clauses[why] if abs(a) != var)
        return found

    def _undo_to(self, size: int):
        while len(self.trail) > size:
            self.values[abs(self.trail.pop())] = None
        self.qhead = min(self.qhead, size)

    def solve(self) -> SolveResult:
        if not self._setup():
            return SolveResult(False, None, 0)
        order = self.order
        nxt = 0
        while True:
            conflict = self.propagate()
            if conflict is not None:
                blame = self.conflict_levels(self.clauses[conflict])
                while True:
                    if not blame:
                        return SolveResult(False, None, self.decisions)
                    top = max(blame)
                    size, lit, refuted = self.levels[top - 1]
                    del self.levels[top - 1:]
                    self._undo_to(size)
                    blame.discard(top)
                    if refuted is None:
                        # first branch failed: the other one is forced by `blame`
                        why = frozenset(blame)
                        self.levels.append((size, -lit, why))
                        self.assign(-lit, why)
                        break
                    blame |= refuted
                nxt = 0
                continue
            while nxt < len(order) and self.values[order[nxt]] is not None:
                nxt += 1
            if nxt == len(order):
                return self._finish()
            next_var = order[nxt]
            self.decisions += 1
            if self.decisions > self.budget:
                raise SolverBudgetError(f"decision budget of {self.budget} exceeded")
            self.levels.append((len(self.trail), -next_var, None))
            self.assign(-next_var)

    def _finish(self) -> SolveResult:
        assignment = {v: bool(self.values[v]) for v in range(1, self.n + 1)}
        bad = first_falsified(self.cnf, assignment)
        if bad is not None:
            raise RuntimeError(f"internal error: solver model falsifies clause {bad}")
        return SolveResult(True, assignment, self.decisions)


def solve(cnf: CnfFormula, budget: int = DEFAULT_DECISION_BUDGET) -> SolveResult:
    return Solver(cnf, budget).solve()


def branch_order(cnf: CnfFormula) -> list:
    """Clausification variables first, in creation order, then the rest.

    Deciding gate outputs before inputs makes the search follow the formula
    top-down, which keeps refutations of the translated formulas short.
    """
    aux = [v for v in range(1, cnf.num_vars + 1)
           if str(cnf.names.get(v, "")).startswith(AUX_PREFIX)]

    def created(v):
        suffix = str(cnf.names[v])[len(AUX_PREFIX):]
        return int(suffix) if suffix.isdigit() else v

    aux.sort(key=created)
    chosen = set(aux)
    return aux + [v for v in range(1, cnf.num_vars + 1) if v not in chosen]


def first_falsified(cnf: CnfFormula, assignment) -> tuple | None:
    """The first clause not satisfied by ``assignment`` (missing = false)."""
    for clause in cnf.clauses:
        if not any(assignment.get(abs(a), False) == (a > 0) for a in clause):
            return clause
    return None


def brute_force_sat(cnf: CnfFormula) -> bool:
    """Truth-table satisfiability; for tests on tiny inputs."""
    for bits in itertools.product((False, True), repeat=cnf.num_vars):
        if first_falsified(cnf, dict(enumerate(bits, start=1))) is None:
            return True
    return False


def truth_table_sat(f) -> bool:
    atoms = sorted(prop_atoms(f), key=str)
    return any(prop_eval(f, dict(zip(atoms, bits)))
               for bits in itertools.product((False, True), repeat=len(atoms)))


# -- DIMACS ---------------------------------------------------------------------------

def emit_dimacs(cnf: CnfFormula) -> str:
    lines = [f"c var {i} {name}" for i, name in sorted(cnf.names.items())]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, clause)) + (" 0" if clause else "0")
                 for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    names: dict = {}
    header = None
    tokens: list = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped == "%":
            continue
        if stripped.startswith("c"):
            parts = stripped.split(None, 3)
            if len(parts) == 4 and parts[1] == "var" and parts[2].isdigit():
                names[int(parts[2])] = parts[3]
            continue
        if stripped.startswith("p"):
            parts = stripped.split()
            if (header is not None or len(parts) != 4 or parts[1] != "cnf"
                    or not parts[2].isdigit() or not parts[3].isdigit()):
                raise DimacsError(f"line {lineno}: malformed header {stripped!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before the 'p cnf' header")
        for tok in stripped.split():
            try:
                tokens.append(int(tok))
            except ValueError:
                raise DimacsError(f"line {lineno}: not an integer literal: {tok!r}") from None
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    num_vars, num_clauses = header
    clauses: list = []
    current: list = []
    for lit in tokens:
        if lit == 0:
            clauses.append(tuple(current))
            current = []
        elif abs(lit) > num_vars:
            raise DimacsError(f"literal {lit} exceeds declared {num_vars} variables")
        else:
            current.append(lit)
    if current:
        raise DimacsError("last clause is missing its terminating 0")
    if len(clauses) != num_clauses:
        raise DimacsError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses), names)
