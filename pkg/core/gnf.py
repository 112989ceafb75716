"""
LTL 보호 정규형(GNF), closure, full system 검사, 라쏘 단어 평가

GNF: b ≡ ⋁_ε (ε ∧ X tail(b, ε)), ε는 b의 명제 위 minterm 전체.
closure: 정규화된 tail들의 고정점.
"""
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from core.errors import UnsupportedFormulaError
from core.formula import (
    BOT, TOP, And, Atom, Bot, Finally, Formula, Globally, Iff, Implies, Next, Not, Or, Top, Until,
    WeakUntil, conj, disj, free_props, is_ltl, is_propositional, print_formula,
)
from core.models import FullSystemResult, Gnf, GnfDisjunct, LassoWord, Letter, PreferenceDescription
from utils.logger import setup_logger

logger = setup_logger(__name__)

Literal = Tuple[Formula, bool]
Clause = FrozenSet[Literal]
Dnf = FrozenSet[Clause]

_TRUE_DNF: Dnf = frozenset((frozenset(),))
_FALSE_DNF: Dnf = frozenset()


def _require_ltl(b: Formula):
    if not is_ltl(b):
        raise UnsupportedFormulaError(f"expected an LTL formula, got {b}")


# ===== 정규화 =====

def _reduce(clauses: Iterable[Clause]) -> Dnf:
    """모순 절 제거 + 포함 관계(subsumption) 제거"""
    consistent = []
    for clause in set(clauses):
        positive = {leaf for leaf, polarity in clause if polarity}
        if any(not polarity and leaf in positive for leaf, polarity in clause):
            continue
        consistent.append(clause)
    consistent.sort(key=len)
    kept: List[Clause] = []
    for clause in consistent:
        if not any(other <= clause for other in kept):
            kept.append(clause)
    return frozenset(kept)


def _and(left: Dnf, right: Dnf) -> Dnf:
    return _reduce(a | b for a in left for b in right)


def _or(left: Dnf, right: Dnf) -> Dnf:
    return _reduce(left | right)


def _negate(dnf: Dnf) -> Dnf:
    result = _TRUE_DNF
    for clause in dnf:
        result = _and(result, frozenset(frozenset(((leaf, not polarity),)) for leaf, polarity in clause))
    return result


def _leaf(f: Formula) -> Formula:
    if isinstance(f, (Next, Finally, Globally)):
        return type(f)(normalize(f.body))
    if isinstance(f, (Until, WeakUntil)):
        return type(f)(normalize(f.left), normalize(f.right))
    return f


@lru_cache(maxsize=65536)
def _dnf(f: Formula) -> Dnf:
    match f:
        case Bot():
            return _FALSE_DNF
        case Top():
            return _TRUE_DNF
        case Not(body):
            return _negate(_dnf(body))
        case And(left, right):
            return _and(_dnf(left), _dnf(right))
        case Or(left, right):
            return _or(_dnf(left), _dnf(right))
        case Implies(left, right):
            return _or(_negate(_dnf(left)), _dnf(right))
        case Iff(left, right):
            a, b = _dnf(left), _dnf(right)
            return _or(_and(a, b), _and(_negate(a), _negate(b)))
    return frozenset((frozenset(((_leaf(f), True),)),))


def _literal_key(literal: Literal) -> Tuple[str, bool]:
    leaf, polarity = literal
    return print_formula(leaf), not polarity


def _dnf_formula(dnf: Dnf) -> Formula:
    clauses = sorted((sorted(clause, key=_literal_key) for clause in dnf),
                     key=lambda lits: [_literal_key(lit) for lit in lits])
    return disj(conj(leaf if polarity else Not(leaf) for leaf, polarity in clause) for clause in clauses)


@lru_cache(maxsize=65536)
def normalize(b: Formula) -> Formula:
    """잎(명제, X, U, F, G, W) 위의 정준 DNF. 의미는 보존된다."""
    _require_ltl(b)
    return _dnf_formula(_dnf(b))


# ===== tail / GNF =====

def _tail_raw(b: Formula, letter: Letter) -> Formula:
    match b:
        case Bot() | Top():
            return b
        case Atom(name):
            return TOP if name in letter else BOT
        case Not(body):
            return Not(_tail_raw(body, letter))
        case And(left, right) | Or(left, right) | Implies(left, right) | Iff(left, right):
            return type(b)(_tail_raw(left, letter), _tail_raw(right, letter))
        case Next(body):
            return body
        case Until(left, right):
            return Or(_tail_raw(right, letter), And(_tail_raw(left, letter), b))
        case WeakUntil(left, right):
            return Or(_tail_raw(right, letter), And(_tail_raw(left, letter), b))
        case Finally(body):
            return Or(_tail_raw(body, letter), b)
        case Globally(body):
            return And(_tail_raw(body, letter), b)
    raise UnsupportedFormulaError(f"expected an LTL formula, got {b}")


@lru_cache(maxsize=65536)
def tail(b: Formula, valuation: Letter) -> Formula:
    """minterm(valuation) 아래에서의 tail (정규화된 식)"""
    _require_ltl(b)
    return normalize(_tail_raw(b, frozenset(valuation)))


def minterm(atoms: Sequence[str], letter: Letter) -> Formula:
    return conj(Atom(name) if name in letter else Not(Atom(name)) for name in atoms)


def letters_over(atoms: Sequence[str]) -> Iterator[Letter]:
    """atoms 위의 모든 valuation (참인 명제 집합)"""
    for bits in product((False, True), repeat=len(atoms)):
        yield frozenset(name for name, bit in zip(atoms, bits) if bit)


def gnf(b: Formula) -> Gnf:
    _require_ltl(b)
    atoms = tuple(sorted(free_props(b)))
    disjuncts = tuple(GnfDisjunct(letter, minterm(atoms, letter), tail(b, letter)) for letter in letters_over(atoms))
    return Gnf(atoms, disjuncts)


def gnf_as_formula(g: Gnf) -> Formula:
    return disj(And(d.guard, Next(d.tail)) for d in g.disjuncts)


def closure(b: Formula) -> Tuple[Formula, ...]:
    """Cl(b): normalize(b)에서 출발한 tail 고정점 (발견 순서)"""
    _require_ltl(b)
    atoms = tuple(sorted(free_props(b)))
    letters = list(letters_over(atoms))
    members = [normalize(b)]
    seen = set(members)
    for member in members:
        for letter in letters:
            successor = tail(member, letter)
            if successor not in seen:
                seen.add(successor)
                members.append(successor)
    logger.debug(f"🔁 closure({b}) 크기 {len(members)}")
    return tuple(members)


# ===== 라쏘 평가 =====

def ltl_eval(word: LassoWord, b: Formula) -> bool:
    """prefix · loop^ω 위에서 b의 정확한 진리값"""
    _require_ltl(b)
    return _positions(word, b, {})[0]


def _positions(word: LassoWord, f: Formula, memo: Dict[Formula, List[bool]]) -> List[bool]:
    if f in memo:
        return memo[f]
    n = word.positions
    nxt = [word.next_position(i) for i in range(n)]
    match f:
        case Bot():
            result = [False] * n
        case Top():
            result = [True] * n
        case Atom(name):
            result = [name in word.letter(i) for i in range(n)]
        case Not(body):
            result = [not v for v in _positions(word, body, memo)]
        case And(left, right):
            result = [a and c for a, c in zip(_positions(word, left, memo), _positions(word, right, memo))]
        case Or(left, right):
            result = [a or c for a, c in zip(_positions(word, left, memo), _positions(word, right, memo))]
        case Implies(left, right):
            result = [(not a) or c for a, c in zip(_positions(word, left, memo), _positions(word, right, memo))]
        case Iff(left, right):
            result = [a == c for a, c in zip(_positions(word, left, memo), _positions(word, right, memo))]
        case Next(body):
            inner = _positions(word, body, memo)
            result = [inner[nxt[i]] for i in range(n)]
        case Until(left, right):
            result = _fixpoint(nxt, _positions(word, left, memo), _positions(word, right, memo), least=True)
        case WeakUntil(left, right):
            result = _fixpoint(nxt, _positions(word, left, memo), _positions(word, right, memo), least=False)
        case Finally(body):
            result = _fixpoint(nxt, [True] * n, _positions(word, body, memo), least=True)
        case Globally(body):
            result = _fixpoint(nxt, _positions(word, body, memo), [False] * n, least=False)
        case _:
            raise UnsupportedFormulaError(f"expected an LTL formula, got {f}")
    memo[f] = result
    return result


def _fixpoint(nxt: List[int], hold: List[bool], goal: List[bool], least: bool) -> List[bool]:
    """x = goal ∨ (hold ∧ X x) 의 최소(U) / 최대(W) 고정점"""
    n = len(nxt)
    value = [not least] * n
    for _ in range(n + 1):
        updated = [goal[i] or (hold[i] and value[nxt[i]]) for i in range(n)]
        if updated == value:
            break
        value = updated
    return value


def enumerate_lassos(alphabet: Iterable[str], bound: int) -> Iterator[LassoWord]:
    """|prefix| + |loop| ≤ bound 인 모든 라쏘 단어"""
    letters = list(letters_over(tuple(sorted(set(alphabet)))))
    for total in range(1, bound + 1):
        for loop_len in range(1, total + 1):
            for prefix in product(letters, repeat=total - loop_len):
                for loop in product(letters, repeat=loop_len):
                    yield LassoWord(prefix, loop)


def full_system_check(bs: Sequence[Formula], alphabet: Iterable[str], bound: int) -> FullSystemResult:
    """bs가 서로소이고 전체를 덮는지 검사 (명제식이면 exact, 아니면 유계 라쏘 sampled)"""
    names = set(alphabet)
    for b in bs:
        _require_ltl(b)
        names |= free_props(b)
    atoms = tuple(sorted(names))

    if all(is_propositional(b) for b in bs):
        for letter in letters_over(atoms):
            word = LassoWord((), (letter,))
            if sum(ltl_eval(word, b) for b in bs) != 1:
                return FullSystemResult(exact=True, holds=False, witness=letter)
        return FullSystemResult(exact=True, holds=True)

    for word in enumerate_lassos(atoms, bound):
        if sum(ltl_eval(word, b) for b in bs) != 1:
            logger.debug(f"⚠️ full system 반례: {word}")
            return FullSystemResult(exact=False, holds=False, witness=word)
    return FullSystemResult(exact=False, holds=True)


def normalize_description(d: PreferenceDescription) -> PreferenceDescription:
    """목표식을 closure 원소와 같은 정규형으로 맞춘 기술"""
    return PreferenceDescription(tuple(normalize(b) for b in d.objectives), d.better)
