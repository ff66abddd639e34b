from __future__ import annotations

from typing import Callable, Optional

from ..errors import ParseError, Span
from . import ast as A
from .lexer import Token, TokenKind, tokenize

# Operator sections usable as ``(op)``.
SECTION_OPS = frozenset(
    "+ - * / mod +. -. *. /. = <> < > <= >= @ ^ ! := && ||".split()
)

# (operators, right associative) from loosest to tightest.
BINARY_LEVELS: list[tuple[frozenset[str], bool]] = [
    (frozenset({"||"}), True),
    (frozenset({"&&"}), True),
    (frozenset({"=", "<>", "<", ">", "<=", ">="}), False),
    (frozenset({"@", "^", "::"}), True),
    (frozenset({"+", "-", "+.", "-."}), False),
    (frozenset({"*", "/", "mod", "*.", "/."}), False),
]
_BINARY_OPS = {op: (level, right) for level, (ops, right) in enumerate(BINARY_LEVELS) for op in ops}

_EXPR_KEYWORDS = frozenset(
    {"let", "fun", "function", "match", "if", "handler", "handle", "with", "new", "val"}
)
_ATOM_KEYWORDS = frozenset({"true", "false", "for", "while"})
_LOOP_KEYWORDS = frozenset({"for", "while"})


def parse_program(tokens: list[Token]) -> list[A.TopItem]:
    """Parse a whole token stream into toplevel items in source order."""
    return Parser(tokens).program()


def parse(source: str) -> list[A.TopItem]:
    return parse_program(tokenize(source))


def parse_term(source: str) -> A.Term:
    """Parse a single term; used by tests and the REPL."""
    p = Parser(tokenize(source))
    term = p.seq()
    p.skip_symbol(";;")
    if not p.at_end():
        p.fail("end of input")
    return term


def parse_type(source: str) -> A.TypeExpr:
    p = Parser(tokenize(source))
    t = p.type_expr()
    if not p.at_end():
        p.fail("end of input")
    return t


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    # ------------------------------------------------------------ cursor

    def peek(self, k: int = 0) -> Optional[Token]:
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail("more input")
        self.i += 1
        return tok

    def is_symbol(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.kind is TokenKind.SYMBOL and tok.text == text

    def is_keyword(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.kind is TokenKind.KEYWORD and tok.text == text

    def is_ident(self, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.kind is TokenKind.IDENT and not tok.text.startswith("'")

    def is_lower_ident(self, k: int = 0) -> bool:
        return self.is_ident(k) and not self.peek(k).text[0].isupper()

    def is_upper_ident(self, k: int = 0) -> bool:
        return self.is_ident(k) and self.peek(k).text[0].isupper()

    def skip_symbol(self, text: str) -> bool:
        if self.is_symbol(text):
            self.i += 1
            return True
        return False

    def skip_keyword(self, text: str) -> bool:
        if self.is_keyword(text):
            self.i += 1
            return True
        return False

    def expect_symbol(self, text: str) -> Token:
        if not self.is_symbol(text):
            self.fail(repr(text))
        return self.advance()

    def expect_keyword(self, text: str) -> Token:
        if not self.is_keyword(text):
            self.fail(repr(text))
        return self.advance()

    def expect_lower_ident(self, what: str = "identifier") -> Token:
        if not self.is_lower_ident():
            self.fail(what)
        return self.advance()

    def fail(self, *expected: str):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            span = last.span if last else None
            found = "end of input"
        else:
            span = tok.span
            found = repr(tok.text)
        exp = frozenset(expected)
        raise ParseError(f"expected {' or '.join(sorted(exp))}, found {found}", span, exp)

    def span_from(self, start: Token) -> Span:
        last = self.tokens[self.i - 1] if self.i > 0 else start
        return Span(start.position, last.end)

    # ------------------------------------------------------------ toplevel

    def program(self) -> list[A.TopItem]:
        items: list[A.TopItem] = []
        while not self.at_end():
            if self.skip_symbol(";;"):
                continue
            if self.is_keyword("type"):
                items.append(self.type_decl())
            elif self.is_keyword("let"):
                items.append(self.toplevel_let())
            else:
                start = self.peek()
                term = self.seq()
                items.append(A.TopTerm(term, self.span_from(start)))
            if not self.at_end() and not (
                self.is_symbol(";;") or self.is_keyword("let") or self.is_keyword("type")
            ):
                self.fail("';;'", "'let'", "'type'")
        return items

    def toplevel_let(self) -> A.TopItem:
        start = self.expect_keyword("let")
        recursive = self.skip_keyword("rec")
        bindings = self.let_bindings(recursive)
        if self.skip_keyword("in"):
            body = self.seq()
            span = self.span_from(start)
            term = A.LetRec(bindings, body, span) if recursive else A.Let(bindings, body, span)
            term = self.continue_seq(term, start)
            return A.TopTerm(term, self.span_from(start))
        span = self.span_from(start)
        return A.TopLetRec(bindings, span) if recursive else A.TopLet(bindings, span)

    def continue_seq(self, term: A.Term, start: Token) -> A.Term:
        if self.is_symbol(";") and self.starts_expr(1):
            self.advance()
            return A.Seq(term, self.seq(), self.span_from(start))
        return term

    # ------------------------------------------------------------ type declarations

    def type_decl(self) -> A.TypeDecl:
        start = self.expect_keyword("type")
        params = self.type_params()
        name = self.expect_lower_ident("type name").text
        self.expect_symbol("=")
        if self.skip_keyword("effect"):
            ops: dict[str, tuple[A.TypeExpr, A.TypeExpr]] = {}
            while self.skip_keyword("operation"):
                op_tok = self.expect_lower_ident("operation name")
                self.expect_symbol(":")
                t = self.type_expr()
                if not isinstance(t, A.TArrowExpr):
                    raise ParseError(f"operation {op_tok.text} must have a function type", op_tok.span)
                if op_tok.text in ops:
                    raise ParseError(f"operation {op_tok.text} declared twice", op_tok.span)
                ops[op_tok.text] = (t.arg, t.result)
            self.expect_keyword("end")
            definition: object = A.EffectSig(name, ops)
        elif self.is_upper_ident() or self.is_symbol("|"):
            self.skip_symbol("|")
            ctors: list[tuple[str, Optional[A.TypeExpr]]] = []
            while True:
                if not self.is_upper_ident():
                    self.fail("constructor")
                cname = self.advance().text
                arg = self.type_expr() if self.skip_keyword("of") else None
                ctors.append((cname, arg))
                if not self.skip_symbol("|"):
                    break
            definition = A.VariantDef(ctors)
        else:
            definition = self.type_expr()
        return A.TypeDecl(name, params, definition, self.span_from(start))

    def type_params(self) -> list[str]:
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.IDENT and tok.text.startswith("'"):
            self.advance()
            return [tok.text]
        if self.is_symbol("(") and self._is_tyvar(1):
            self.advance()
            params = [self.advance().text]
            while self.skip_symbol(","):
                if not self._is_tyvar():
                    self.fail("type variable")
                params.append(self.advance().text)
            self.expect_symbol(")")
            return params
        return []

    def _is_tyvar(self, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.kind is TokenKind.IDENT and tok.text.startswith("'")

    # ------------------------------------------------------------ type expressions

    def type_expr(self) -> A.TypeExpr:
        start = self.peek()
        left = self.type_sum()
        if self.skip_symbol("->"):
            return A.TArrowExpr(left, self.type_expr(), self.span_from(start))
        if self.skip_symbol("=>"):
            return A.THandlerExpr(left, self.type_expr(), self.span_from(start))
        return left

    def type_sum(self) -> A.TypeExpr:
        start = self.peek()
        left = self.type_prod()
        while self.skip_symbol("+"):
            right = self.type_prod()
            left = A.TConExpr("sum", [left, right], self.span_from(start))
        return left

    def type_prod(self) -> A.TypeExpr:
        start = self.peek()
        items = [self.type_app()]
        while self.skip_symbol("*"):
            items.append(self.type_app())
        if len(items) == 1:
            return items[0]
        return A.TProdExpr(items, self.span_from(start))

    def type_app(self) -> A.TypeExpr:
        start = self.peek()
        args = self.type_atom()
        while self.is_lower_ident():
            name = self.advance().text
            args = [A.TConExpr(name, args, self.span_from(start))]
        if len(args) != 1:
            self.fail("type constructor")
        return args[0]

    def type_atom(self) -> list[A.TypeExpr]:
        tok = self.peek()
        if self._is_tyvar():
            self.advance()
            return [A.TVarExpr(tok.text, tok.span)]
        if self.is_lower_ident():
            self.advance()
            return [A.TConExpr(tok.text, [], tok.span)]
        if self.skip_symbol("("):
            items = [self.type_expr()]
            while self.skip_symbol(","):
                items.append(self.type_expr())
            self.expect_symbol(")")
            return items
        self.fail("type")

    # ------------------------------------------------------------ let bindings

    def let_bindings(self, recursive: bool) -> list:
        bindings = [self.let_binding(recursive)]
        while self.skip_keyword("and"):
            bindings.append(self.let_binding(recursive))
        if recursive:
            names = [n for n, _ in bindings]
            if len(set(names)) != len(names):
                self.fail("distinct names in let rec")
        return bindings

    def _binder_name(self) -> Optional[str]:
        """A function name: an identifier or an operator section such as ``(!)``."""
        if self.is_lower_ident():
            return self.advance().text
        if (
            self.is_symbol("(")
            and self.peek(1) is not None
            and self.peek(1).text in SECTION_OPS
            and self.peek(1).kind is not TokenKind.STRING
            and self.is_symbol(")", 2)
        ):
            self.advance()
            name = self.advance().text
            self.advance()
            return name
        return None

    def let_binding(self, recursive: bool):
        start = self.peek()
        save = self.i
        name = self._binder_name()
        if name is not None and (recursive or not self.is_symbol("=")) and not self.is_symbol(",") and not self.is_symbol("::"):
            params = []
            while not self.is_symbol("=") and not self.is_symbol(":"):
                params.append(self.pattern_atom())
            if self.skip_symbol(":"):
                # return type annotations are accepted and ignored
                self.type_expr()
            self.expect_symbol("=")
            body = self.seq()
            for p in reversed(params):
                body = A.Lambda(p, body, self.span_from(start))
            if recursive:
                if not isinstance(body, A.Lambda):
                    raise ParseError(f"let rec {name} must bind a function", start.span)
                return (name, body)
            return (A.PVar(name, start.span), body)
        if recursive:
            self.i = save
            self.fail("function name")
        self.i = save
        pat = self.pattern()
        self.expect_symbol("=")
        return (pat, self.seq())

    # ------------------------------------------------------------ expressions

    def starts_expr(self, k: int = 0) -> bool:
        tok = self.peek(k)
        if tok is None:
            return False
        if tok.kind is TokenKind.KEYWORD:
            return tok.text in _EXPR_KEYWORDS or tok.text in _ATOM_KEYWORDS
        if tok.kind is TokenKind.SYMBOL:
            return tok.text in ("(", "[", "!", "-", "-.")
        return not tok.text.startswith("'")

    def starts_atom(self, k: int = 0) -> bool:
        tok = self.peek(k)
        if tok is None:
            return False
        if tok.kind is TokenKind.KEYWORD:
            return tok.text in ("true", "false")
        if tok.kind is TokenKind.SYMBOL:
            return tok.text in ("(", "[", "!")
        return not tok.text.startswith("'")

    def seq(self) -> A.Term:
        parts = [(self.peek(), self.expr())]
        while self.is_symbol(";"):
            if not self.starts_expr(1):
                self.advance()
                break
            self.advance()
            parts.append((self.peek(), self.expr()))
        _, term = parts.pop()
        while parts:
            start, first = parts.pop()
            term = A.Seq(first, term, self.span_from(start))
        return term

    def expr(self) -> A.Term:
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.KEYWORD and tok.text in _EXPR_KEYWORDS:
            return self.keyword_expr()
        return self.assign()

    def keyword_expr(self) -> A.Term:
        tok = self.peek()
        method: Callable[[], A.Term] = getattr(self, "kw_" + tok.text)
        return method()

    def assign(self) -> A.Term:
        start = self.peek()
        left = self.tuple_expr()
        if self.is_symbol(":="):
            op = self.advance()
            right = self.expr()
            fn = A.Apply(A.Var(":=", op.span), left, self.span_from(start))
            return A.Apply(fn, right, self.span_from(start))
        return left

    def tuple_expr(self) -> A.Term:
        start = self.peek()
        items = [self.binary(0)]
        while self.skip_symbol(","):
            items.append(self.binary(0))
        if len(items) == 1:
            return items[0]
        return A.Tuple(items, self.span_from(start))

    def _binary_op(self) -> Optional[tuple[Token, int, bool]]:
        tok = self.peek()
        if tok is None or tok.kind not in (TokenKind.SYMBOL, TokenKind.KEYWORD):
            return None
        info = _BINARY_OPS.get(tok.text)
        return None if info is None else (tok, *info)

    def binary(self, level: int) -> A.Term:
        """Precedence climbing over BINARY_LEVELS; operators below ``level`` end the term."""
        start = self.peek()
        left = self.unary()
        while True:
            found = self._binary_op()
            if found is None or found[1] < level:
                return left
            op, op_level, right_assoc = found
            self.advance()
            right = self.binary(op_level if right_assoc else op_level + 1)
            left = self.make_binary(op, left, right, self.span_from(start))

    def make_binary(self, op: Token, left: A.Term, right: A.Term, span: Span) -> A.Term:
        if op.text == "::":
            return A.Cons(left, right, span)
        if op.text == "&&":
            return A.If(left, right, A.Const(False, op.span), span)
        if op.text == "||":
            return A.If(left, A.Const(True, op.span), right, span)
        return A.Apply(A.Apply(A.Var(op.text, op.span), left, span), right, span)

    def unary(self) -> A.Term:
        if self.is_symbol("-") or self.is_symbol("-."):
            op = self.advance()
            operand = self.unary()
            span = self.span_from(op)
            if (
                isinstance(operand, A.Const)
                and type(operand.value) in (int, float)
                and op.text == "-"
                and not isinstance(operand.value, bool)
            ):
                # fold only literals written directly after the sign
                if operand.value >= 0 and self.tokens[self.i - 1].kind in (TokenKind.INT, TokenKind.FLOAT):
                    return A.Const(-operand.value, span)
            return A.Apply(A.Var("~" + op.text, op.span), operand, span)
        return self.application()

    def application(self) -> A.Term:
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.KEYWORD and tok.text in _EXPR_KEYWORDS:
            return self.keyword_expr()
        start = tok
        head = self.prefix()
        bare = start.kind is TokenKind.IDENT
        if bare and isinstance(head, A.Variant) and head.arg is None and self.starts_atom():
            arg = self.prefix()
            return A.Variant(head.constructor, arg, self.span_from(start))
        while self.starts_atom():
            arg = self.prefix()
            head = A.Apply(head, arg, self.span_from(start))
        return head

    def prefix(self) -> A.Term:
        start = self.peek()
        if self.is_symbol("!"):
            op = self.advance()
            operand = self.prefix()
            return A.Apply(A.Var("!", op.span), operand, self.span_from(start))
        term = self.atom()
        while self.is_symbol("#"):
            self.advance()
            op = self.expect_lower_ident("operation name")
            term = A.Project(term, op.text, self.span_from(start))
        return term

    def atom(self) -> A.Term:
        tok = self.peek()
        if tok is None:
            self.fail("expression")
        kind = tok.kind
        if kind in (TokenKind.INT, TokenKind.FLOAT, TokenKind.STRING):
            self.advance()
            return A.Const(tok.value, tok.span)
        if kind is TokenKind.IDENT and not tok.text.startswith("'"):
            self.advance()
            if tok.text[0].isupper():
                return A.Variant(tok.text, None, tok.span)
            return A.Var(tok.text, tok.span)
        if kind is TokenKind.KEYWORD:
            if tok.text in ("true", "false"):
                self.advance()
                return A.Const(tok.text == "true", tok.span)
            if tok.text in _LOOP_KEYWORDS:
                return self.keyword_expr()
        if self.is_symbol("("):
            self.advance()
            if self.skip_symbol(")"):
                return A.Const(A.UNIT, self.span_from(tok))
            nxt = self.peek()
            if nxt is not None and nxt.text in SECTION_OPS and nxt.kind is not TokenKind.STRING and self.is_symbol(")", 1):
                self.advance()
                self.advance()
                return A.Var(nxt.text, self.span_from(tok))
            inner = self.seq()
            self.expect_symbol(")")
            return inner
        if self.is_symbol("["):
            self.advance()
            items = []
            while not self.is_symbol("]"):
                items.append(self.expr())
                if not self.skip_symbol(";"):
                    break
            self.expect_symbol("]")
            return A.ListLit(items, self.span_from(tok))
        self.fail("expression")

    # ------------------------------------------------------------ keyword forms

    def kw_let(self) -> A.Term:
        # a chain "let .. in let .. in" is read in a loop so long chains do not
        # exhaust the host stack
        headers = []
        while True:
            start = self.expect_keyword("let")
            recursive = self.skip_keyword("rec")
            bindings = self.let_bindings(recursive)
            self.expect_keyword("in")
            headers.append((start, recursive, bindings))
            if not self.is_keyword("let"):
                break
        body = self.seq()
        for start, recursive, bindings in reversed(headers):
            span = self.span_from(start)
            body = A.LetRec(bindings, body, span) if recursive else A.Let(bindings, body, span)
        return body

    def kw_fun(self) -> A.Term:
        start = self.expect_keyword("fun")
        params = [self.pattern_atom()]
        while not self.is_symbol("->") and not self.is_symbol(":"):
            params.append(self.pattern_atom())
        if self.skip_symbol(":"):
            annot = self.type_sum()
            params[-1] = A.PAnnot(params[-1], annot, self.span_from(start))
        self.expect_symbol("->")
        body = self.seq()
        for p in reversed(params):
            body = A.Lambda(p, body, self.span_from(start))
        return body

    def kw_function(self) -> A.Term:
        start = self.expect_keyword("function")
        cases = self.match_cases()
        span = self.span_from(start)
        return A.Lambda(A.PVar("$arg", span), A.Match(A.Var("$arg", span), cases, span), span)

    def kw_match(self) -> A.Term:
        start = self.expect_keyword("match")
        scrutinee = self.seq()
        self.expect_keyword("with")
        cases = self.match_cases()
        return A.Match(scrutinee, cases, self.span_from(start))

    def match_cases(self) -> list[tuple[A.Pattern, A.Term]]:
        if not self.is_symbol("|") and not self.starts_pattern():
            return []
        self.skip_symbol("|")
        cases = []
        while True:
            pat = self.pattern()
            self.expect_symbol("->")
            cases.append((pat, self.seq()))
            if not self.skip_symbol("|"):
                return cases

    def kw_if(self) -> A.Term:
        start = self.expect_keyword("if")
        cond = self.seq()
        self.expect_keyword("then")
        then = self.expr()
        if self.skip_keyword("else"):
            orelse = self.expr()
        else:
            orelse = A.Const(A.UNIT, self.span_from(start))
        return A.If(cond, then, orelse, self.span_from(start))

    def kw_val(self) -> A.Term:
        start = self.expect_keyword("val")
        return A.Val(self.expr(), self.span_from(start))

    def kw_new(self) -> A.Term:
        start = self.expect_keyword("new")
        name = self.expect_lower_ident("effect type name").text
        if not self.skip_symbol("@"):
            return A.New(name, None, None, self.span_from(start))
        init = self.application()
        self.expect_keyword("with")
        clauses: list[A.ResourceClause] = []
        seen = set()
        while self.is_keyword("operation"):
            cstart = self.advance()
            op = self.expect_lower_ident("operation name")
            if op.text in seen:
                raise ParseError(f"duplicate resource clause for {op.text}", op.span)
            seen.add(op.text)
            arg = self.pattern_atom()
            self.expect_symbol("@")
            state = self.pattern_atom()
            self.expect_symbol("->")
            body = self.seq()
            clauses.append(A.ResourceClause(op.text, arg, state, body, self.span_from(cstart)))
        self.expect_keyword("end")
        return A.New(name, init, clauses, self.span_from(start))

    def kw_with(self) -> A.Term:
        start = self.expect_keyword("with")
        handler = self.expr()
        self.expect_keyword("handle")
        body = self.seq()
        return A.With(handler, body, self.span_from(start))

    def kw_handle(self) -> A.Term:
        start = self.expect_keyword("handle")
        body = self.seq()
        self.expect_keyword("with")
        hstart = self.peek()
        handler = self.handler_clauses(hstart)
        self.skip_keyword("end")
        return A.Handle(body, handler, self.span_from(start))

    def kw_handler(self) -> A.Term:
        start = self.expect_keyword("handler")
        return self.handler_clauses(start)

    def handler_clauses(self, start: Token) -> A.HandlerLit:
        clauses: list[A.OpClause] = []
        val = fin = None
        if not (
            self.skip_symbol("|")
            or self.is_keyword("val")
            or self.is_keyword("finally")
            or self.starts_atom()
        ):
            return A.HandlerLit(clauses, val, fin, self.span_from(start))
        while True:
            cstart = self.peek()
            if self.skip_keyword("val"):
                if val is not None:
                    raise ParseError("handler has more than one val clause", cstart.span)
                pat = self.pattern_atom()
                self.expect_symbol("->")
                val = (pat, self.seq())
            elif self.skip_keyword("finally"):
                if fin is not None:
                    raise ParseError("handler has more than one finally clause", cstart.span)
                pat = self.pattern_atom()
                self.expect_symbol("->")
                fin = (pat, self.seq())
            else:
                inst = self.atom()
                self.expect_symbol("#")
                op = self.expect_lower_ident("operation name").text
                arg = self.pattern_atom()
                cont = self.pattern_atom()
                if not isinstance(cont, (A.PVar, A.PWild)):
                    raise ParseError("continuation must be bound to a variable", cstart.span)
                self.expect_symbol("->")
                body = self.seq()
                for other in clauses:
                    if other.op == op and other.instance == inst:
                        raise ParseError(f"duplicate handler clause for #{op}", cstart.span)
                clauses.append(A.OpClause(inst, op, arg, cont, body, self.span_from(cstart)))
            if not self.skip_symbol("|"):
                break
        return A.HandlerLit(clauses, val, fin, self.span_from(start))

    def kw_for(self) -> A.Term:
        start = self.expect_keyword("for")
        var = self.expect_lower_ident("loop variable").text
        self.expect_symbol("=")
        lo = self.seq()
        if self.skip_keyword("to"):
            downto = False
        else:
            self.expect_keyword("downto")
            downto = True
        hi = self.seq()
        self.expect_keyword("do")
        body = self.seq()
        self.expect_keyword("done")
        return A.For(var, lo, hi, body, downto, self.span_from(start))

    def kw_while(self) -> A.Term:
        start = self.expect_keyword("while")
        cond = self.seq()
        self.expect_keyword("do")
        body = self.seq()
        self.expect_keyword("done")
        return A.While(cond, body, self.span_from(start))

    # ------------------------------------------------------------ patterns

    def starts_pattern(self, k: int = 0) -> bool:
        tok = self.peek(k)
        if tok is None:
            return False
        if tok.kind is TokenKind.SYMBOL:
            return tok.text in ("(", "[", "_", "-")
        if tok.kind is TokenKind.KEYWORD:
            return tok.text in ("true", "false")
        return not tok.text.startswith("'")

    def pattern(self) -> A.Pattern:
        start = self.peek()
        items = [self.pattern_cons()]
        while self.skip_symbol(","):
            items.append(self.pattern_cons())
        if len(items) == 1:
            return items[0]
        return A.PTuple(items, self.span_from(start))

    def pattern_cons(self) -> A.Pattern:
        start = self.peek()
        head = self.pattern_app()
        if self.skip_symbol("::"):
            return A.PCons(head, self.pattern_cons(), self.span_from(start))
        return head

    def pattern_app(self) -> A.Pattern:
        start = self.peek()
        if self.is_upper_ident():
            name = self.advance().text
            if self.starts_pattern() and not self.is_symbol("-"):
                return A.PVariant(name, self.pattern_atom(), self.span_from(start))
            return A.PVariant(name, None, self.span_from(start))
        return self.pattern_atom()

    def pattern_atom(self) -> A.Pattern:
        tok = self.peek()
        if tok is None:
            self.fail("pattern")
        if self.skip_symbol("_"):
            return A.PWild(tok.span)
        if tok.kind in (TokenKind.INT, TokenKind.FLOAT, TokenKind.STRING):
            self.advance()
            return A.PConst(tok.value, tok.span)
        if self.is_symbol("-"):
            self.advance()
            num = self.peek()
            if num is None or num.kind not in (TokenKind.INT, TokenKind.FLOAT):
                self.fail("number")
            self.advance()
            return A.PConst(-num.value, self.span_from(tok))
        if self.is_keyword("true") or self.is_keyword("false"):
            self.advance()
            return A.PConst(tok.text == "true", tok.span)
        if self.is_upper_ident():
            self.advance()
            return A.PVariant(tok.text, None, tok.span)
        if self.is_lower_ident():
            self.advance()
            return A.PVar(tok.text, tok.span)
        if self.skip_symbol("("):
            if self.skip_symbol(")"):
                return A.PConst(A.UNIT, self.span_from(tok))
            nxt = self.peek()
            if nxt is not None and nxt.text in SECTION_OPS and nxt.kind is not TokenKind.STRING and self.is_symbol(")", 1):
                self.advance()
                self.advance()
                return A.PVar(nxt.text, self.span_from(tok))
            inner = self.pattern()
            if self.skip_symbol(":"):
                annot = self.type_expr()
                inner = A.PAnnot(inner, annot, self.span_from(tok))
            self.expect_symbol(")")
            return inner
        if self.skip_symbol("["):
            items = []
            while not self.is_symbol("]"):
                items.append(self.pattern())
                if not self.skip_symbol(";"):
                    break
            self.expect_symbol("]")
            result: A.Pattern = A.PNil(self.span_from(tok))
            for item in reversed(items):
                result = A.PCons(item, result, self.span_from(tok))
            return result
        self.fail("pattern")
