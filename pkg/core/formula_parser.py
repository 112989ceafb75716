"""
논리식 구문 분석기 (lark LALR)

ASCII 표기:
    false, true, 명제 [a-z][a-z0-9_]*, 경로 변수 ~c
    !, &, |, ->, <->, X, U, F, G, W, E, A
    exists p . A, forall p . A
    <<1,3>> B, [[1,3]] B, ]1,3[ A
    B1 <ff[i] B2, <ea[i], <ae[i], <ee[i], >ea[i], >ae[i]
    Es[i] ~c . A, E1[i] ~c . A, As[i] ~c . A

결합 우선순위 (느슨 → 강함): 양화 바인더, <->, ->(우결합), |, &, U/W(우결합), 선호, 단항
바인더는 가능한 한 오른쪽까지 확장되며 피연산자 위치에서는 괄호가 필요합니다.
"""
from typing import Iterable, Optional

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from core.errors import AtlscPrefError, FormulaSyntaxError, UnknownAgentError
from core.formula import (
    BOT, TOP, And, Atom, CoStratMod, ExistsPath, ExistsProp, Finally, ForallPath, ForallProp, Formula,
    Globally, Iff, Implies, Next, Not, OneQuant, Or, PathAtom, Pref, PrefVariant, Relax, SimForall,
    SimQuant, StratMod, Until, WeakUntil, agents_of,
)

FORMULA_GRAMMAR = r"""
?start: formula

?formula: binder
        | iff

binder: "exists" PROP "." formula                   -> exists_prop
      | "forall" PROP "." formula                   -> forall_prop
      | SIM_EXISTS AGENT "]" PATHVAR "." formula    -> sim_quant
      | ONE_EXISTS AGENT "]" PATHVAR "." formula    -> one_quant
      | SIM_FORALL AGENT "]" PATHVAR "." formula    -> sim_forall

?iff: imp
    | iff "<->" imp                                 -> iff

?imp: disj
    | disj "->" imp                                 -> implies

?disj: conj
     | disj "|" conj                                -> or_

?conj: until
     | conj "&" until                               -> and_

?until: pref
      | pref "U" until                              -> until
      | pref "W" until                              -> weak_until

?pref: unary
     | unary PREF_OP unary                          -> pref

?unary: primary
      | "!" unary                                   -> not_
      | "X" unary                                   -> next
      | "F" unary                                   -> finally_
      | "G" unary                                   -> globally
      | "E" unary                                   -> exists_path
      | "A" unary                                   -> forall_path
      | "<<" agents ">>" unary                      -> strat_mod
      | "[[" agents "]]" unary                      -> co_strat_mod
      | "]" agents "[" unary                        -> relax

?primary: "true"                                    -> top
        | "false"                                   -> bot
        | PROP                                      -> atom
        | PATHVAR                                   -> path_atom
        | "(" formula ")"

agents: (AGENT ("," AGENT)*)?

PREF_OP: /[<>](ff|ea|ae|ee)\[[A-Za-z0-9_]+\]/
SIM_EXISTS: "Es["
ONE_EXISTS: "E1["
SIM_FORALL: "As["
PROP: /(?!(?:true|false|exists|forall)\b)[a-z][a-z0-9_]*/
PATHVAR: /~[a-z][a-z0-9_]*/
AGENT: /[A-Za-z0-9_]+/

%import common.WS
%ignore WS
"""


class FormulaTransformer(Transformer):
    """구문 트리 → Formula AST"""

    def top(self, _):
        return TOP

    def bot(self, _):
        return BOT

    def atom(self, items):
        return Atom(str(items[0]))

    def path_atom(self, items):
        return PathAtom(str(items[0])[1:])

    def agents(self, items):
        return frozenset(str(item) for item in items)

    def not_(self, items):
        return Not(items[0])

    def next(self, items):
        return Next(items[0])

    def finally_(self, items):
        return Finally(items[0])

    def globally(self, items):
        return Globally(items[0])

    def exists_path(self, items):
        return ExistsPath(items[0])

    def forall_path(self, items):
        return ForallPath(items[0])

    def strat_mod(self, items):
        return StratMod(items[0], items[1])

    def co_strat_mod(self, items):
        return CoStratMod(items[0], items[1])

    def relax(self, items):
        return Relax(items[0], items[1])

    def and_(self, items):
        return And(items[0], items[1])

    def or_(self, items):
        return Or(items[0], items[1])

    def implies(self, items):
        return Implies(items[0], items[1])

    def iff(self, items):
        return Iff(items[0], items[1])

    def until(self, items):
        return Until(items[0], items[1])

    def weak_until(self, items):
        return WeakUntil(items[0], items[1])

    def pref(self, items):
        left, op, right = items
        text = str(op)
        symbol, agent = text[:3], text[4:-1]
        try:
            variant = PrefVariant.from_symbol(symbol)
        except ValueError:
            raise FormulaSyntaxError(f"unknown preference operator '{symbol}'", op.line, op.column)
        return Pref(variant, agent, left, right)

    def exists_prop(self, items):
        return ExistsProp(str(items[0]), items[1])

    def forall_prop(self, items):
        return ForallProp(str(items[0]), items[1])

    def _path_binder(self, node_type, items):
        _, agent, var, body = items
        return node_type(str(agent), str(var)[1:], body)

    def sim_quant(self, items):
        return self._path_binder(SimQuant, items)

    def one_quant(self, items):
        return self._path_binder(OneQuant, items)

    def sim_forall(self, items):
        return self._path_binder(SimForall, items)


_PARSER = Lark(FORMULA_GRAMMAR, parser="lalr", maybe_placeholders=False)


def parse_formula(text: str, universe: Optional[Iterable[str]] = None) -> Formula:
    """논리식 텍스트를 AST로 변환합니다.

    Args:
        text: ASCII 논리식
        universe: 허용 에이전트 집합 (None이면 검사 생략)

    Returns:
        Formula AST

    Raises:
        FormulaSyntaxError, UnknownAgentError, ClassificationError
    """
    try:
        tree = _PARSER.parse(text)
    except (UnexpectedCharacters, UnexpectedToken, UnexpectedEOF) as e:
        raise FormulaSyntaxError(f"cannot parse formula: {_describe(e)}", getattr(e, "line", None),
                                 getattr(e, "column", None)) from None
    except UnexpectedInput as e:
        raise FormulaSyntaxError("cannot parse formula", e.line, e.column) from None

    try:
        formula = FormulaTransformer().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, AtlscPrefError):
            raise e.orig_exc from None
        raise

    if universe is not None:
        allowed = {str(agent) for agent in universe}
        unknown = agents_of(formula) - allowed
        if unknown:
            raise UnknownAgentError(f"agents not declared in the model: {sorted(unknown)}")
    return formula


def _describe(error: UnexpectedInput) -> str:
    if isinstance(error, UnexpectedToken):
        token: Token = error.token
        return f"unexpected token {token!r}"
    if isinstance(error, UnexpectedCharacters):
        return f"unexpected character {error.char!r}"
    return "unexpected end of input"
