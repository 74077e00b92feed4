use std::collections::{BTreeSet, HashMap};

use crate::error::{ParseError, ParseErrorKind};

use super::ground::{eval_atom, GroundAtom};
use super::lexer::{Lexer, Token, TokenKind};
use super::{
    ArithOp, Atom, ChoiceElementSyntax, InstanceFamily, Literal, Pos, Program, Rule, RuleHead,
    Span, Term, MAX_TERM_DEPTH,
};

/// Recursive-descent parser over a token buffer. Shared by the program,
/// instance and mapping front ends.
pub struct Parser {
    tokens: Vec<Token>,
    cursor: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { tokens: Lexer::new(src).tokenize()?, cursor: 0 })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.cursor]
    }

    fn peek_kind(&self) -> &TokenKind {
        &self.tokens[self.cursor].kind
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek_kind(), TokenKind::Eof)
    }

    pub fn advance(&mut self) -> Token {
        let tok = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        tok
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<Token, ParseError> {
        if self.peek_kind() == kind {
            Ok(self.advance())
        } else {
            Err(self.unexpected(what))
        }
    }

    pub fn unexpected(&self, expected: &str) -> ParseError {
        let tok = self.peek();
        ParseError::new(
            ParseErrorKind::Syntax,
            tok.pos,
            tok.kind.describe(),
            format!("expected {expected}"),
        )
    }

    pub fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek_kind(), TokenKind::Ident(w) if w == word)
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.peek().pos;
        let mut lhs = self.primary()?;
        loop {
            let op = match self.peek_kind() {
                TokenKind::Plus => ArithOp::Add,
                TokenKind::Minus => ArithOp::Sub,
                _ => break,
            };
            self.advance();
            let rhs = self.primary()?;
            lhs = Term::Arith(Box::new(lhs), op, Box::new(rhs));
        }
        if lhs.depth() > MAX_TERM_DEPTH {
            return Err(ParseError::new(
                ParseErrorKind::TooDeep,
                start,
                self.peek().kind.describe(),
                format!("function terms may nest at most {MAX_TERM_DEPTH} deep"),
            ));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let tok = self.advance();
        match tok.kind {
            TokenKind::Int(i) => Ok(Term::Int(i)),
            TokenKind::Minus => match self.peek_kind().clone() {
                TokenKind::Int(i) => {
                    self.advance();
                    Ok(Term::Int(-i))
                }
                _ => Err(self.unexpected("integer after unary minus")),
            },
            TokenKind::Variable(v) => Ok(Term::Variable(v)),
            TokenKind::Ident(name) => {
                if self.eat(&TokenKind::LParen) {
                    let args = self.term_list()?;
                    Ok(Term::Compound(name, args))
                } else {
                    Ok(Term::Constant(name))
                }
            }
            TokenKind::LParen => {
                let inner = self.term()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError::new(
                ParseErrorKind::Syntax,
                tok.pos,
                other.describe(),
                "expected a term",
            )),
        }
    }

    /// Comma separated terms up to and including the closing parenthesis.
    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        while self.eat(&TokenKind::Comma) {
            args.push(self.term()?);
        }
        self.expect(&TokenKind::RParen, "`,` or `)`")?;
        Ok(args)
    }

    pub fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek_kind().clone() {
            TokenKind::Ident(name) if name != "not" => {
                self.advance();
                let args = if self.eat(&TokenKind::LParen) { self.term_list()? } else { Vec::new() };
                if let Some(depth) = args.iter().map(Term::depth).max() {
                    if depth > MAX_TERM_DEPTH {
                        return Err(self.unexpected("shallower function terms"));
                    }
                }
                Ok(Atom { predicate: name, args })
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    /// `[-] atom`
    pub fn classical_atom(&mut self) -> Result<(Atom, bool), ParseError> {
        let neg = self.eat(&TokenKind::Minus);
        Ok((self.atom()?, neg))
    }

    /// `[-] atom` without variables or arithmetic left after evaluation.
    pub fn ground_atom(&mut self) -> Result<GroundAtom, ParseError> {
        let start = self.peek().pos;
        let (atom, neg) = self.classical_atom()?;
        if !atom.is_ground() {
            return Err(ParseError::new(ParseErrorKind::NonGroundFact, start, atom.predicate.clone(), "atom must be ground"));
        }
        eval_atom(&atom, neg, &Default::default())
            .map_err(|e| ParseError::new(ParseErrorKind::NonGroundFact, start, atom.predicate.clone(), e.to_string()))
    }

    fn body_literal(&mut self) -> Result<Literal, ParseError> {
        let default_neg = if self.is_keyword("not") {
            self.advance();
            true
        } else {
            false
        };
        let (atom, strong_neg) = self.classical_atom()?;
        Ok(Literal { atom, strong_neg, default_neg })
    }

    fn literal_list(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut lits = vec![self.body_literal()?];
        while self.eat(&TokenKind::Comma) {
            lits.push(self.body_literal()?);
        }
        Ok(lits)
    }

    fn bound(&mut self) -> Result<Option<u32>, ParseError> {
        match *self.peek_kind() {
            TokenKind::Int(i) => {
                let tok = self.advance();
                u32::try_from(i).map(Some).map_err(|_| {
                    ParseError::new(ParseErrorKind::InvalidBounds, tok.pos, i.to_string(), "choice bound out of range")
                })
            }
            _ => Ok(None),
        }
    }

    fn choice_head(&mut self) -> Result<RuleHead, ParseError> {
        let start = self.peek().pos;
        let lower = self.bound()?;
        self.expect(&TokenKind::LBrace, "`{`")?;
        let mut elements = Vec::new();
        if !matches!(self.peek_kind(), TokenKind::RBrace) {
            loop {
                let (atom, strong_neg) = self.classical_atom()?;
                let condition = if self.eat(&TokenKind::Colon) { self.literal_list()? } else { Vec::new() };
                elements.push(ChoiceElementSyntax { atom, strong_neg, condition });
                if !self.eat(&TokenKind::Semicolon) {
                    break;
                }
            }
        }
        self.expect(&TokenKind::RBrace, "`;` or `}`")?;
        let upper = self.bound()?;
        if let (Some(l), Some(u)) = (lower, upper) {
            if l > u {
                return Err(ParseError::new(
                    ParseErrorKind::InvalidBounds,
                    start,
                    format!("{l} .. {u}"),
                    "lower choice bound exceeds upper bound",
                ));
            }
        }
        Ok(RuleHead::Choice { lower, upper, elements })
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let start = self.peek().pos;
        let head = match self.peek_kind() {
            TokenKind::If => RuleHead::Falsum,
            TokenKind::Int(_) | TokenKind::LBrace => self.choice_head()?,
            TokenKind::Ident(w) if w == "not" => {
                let tok = self.peek();
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    tok.pos,
                    "not",
                    "default negation is not allowed in rule heads",
                ));
            }
            _ => {
                let (atom, strong_neg) = self.classical_atom()?;
                RuleHead::Atom(Literal { atom, strong_neg, default_neg: false })
            }
        };
        let body = if self.eat(&TokenKind::If) {
            if matches!(self.peek_kind(), TokenKind::Dot) {
                Vec::new()
            } else {
                self.literal_list()?
            }
        } else {
            Vec::new()
        };
        let end = self.expect(&TokenKind::Dot, "`.`")?.pos;
        Ok(Rule { head, body, span: Span { start, end } })
    }
}

fn plain_and_arith_vars(atom: &Atom) -> (Vec<&str>, Vec<&str>) {
    let mut plain = Vec::new();
    let mut arith = Vec::new();
    for t in &atom.args {
        t.collect_vars(false, &mut plain, &mut arith);
    }
    (plain, arith)
}

/// Safety: variables in the head, in default-negated literals, or inside
/// arithmetic must also occur outside arithmetic in a positive body literal
/// (for choice elements, the positive part of the element condition counts
/// as well).
fn check_safety(rule: &Rule) -> Result<(), ParseError> {
    let mut bound: Vec<&str> = Vec::new();
    for lit in rule.body.iter().filter(|l| !l.default_neg) {
        bound.extend(plain_and_arith_vars(&lit.atom).0);
    }
    let unsafe_var = |var: &str| {
        ParseError::new(
            ParseErrorKind::Unsafe,
            rule.span.start,
            var,
            format!("unsafe variable {var}: it must occur in a positive body literal"),
        )
    };
    let check = |lits: &[Literal], bound: &[&str], need_head: &[&str]| -> Result<(), ParseError> {
        for v in need_head {
            if !bound.contains(v) {
                return Err(unsafe_var(v));
            }
        }
        for lit in lits {
            let (plain, arith) = plain_and_arith_vars(&lit.atom);
            if lit.default_neg {
                if let Some(v) = plain.iter().chain(arith.iter()).find(|v| !bound.contains(v)) {
                    return Err(unsafe_var(v));
                }
            } else if let Some(v) = arith.iter().find(|v| !bound.contains(v)) {
                return Err(unsafe_var(v));
            }
        }
        Ok(())
    };
    match &rule.head {
        RuleHead::Atom(lit) => {
            let (plain, arith) = plain_and_arith_vars(&lit.atom);
            let head_vars: Vec<&str> = plain.into_iter().chain(arith).collect();
            check(&rule.body, &bound, &head_vars)?;
        }
        RuleHead::Falsum => check(&rule.body, &bound, &[])?,
        RuleHead::Choice { elements, .. } => {
            check(&rule.body, &bound, &[])?;
            for el in elements {
                let mut local = bound.clone();
                for lit in el.condition.iter().filter(|l| !l.default_neg) {
                    local.extend(plain_and_arith_vars(&lit.atom).0);
                }
                let (plain, arith) = plain_and_arith_vars(&el.atom);
                let vars: Vec<&str> = plain.into_iter().chain(arith).collect();
                check(&el.condition, &local, &vars)?;
            }
        }
    }
    Ok(())
}

#[derive(Default)]
struct ArityTable {
    seen: HashMap<String, (usize, Pos)>,
}

impl ArityTable {
    fn note(&mut self, atom: &Atom, pos: Pos) -> Result<(), ParseError> {
        match self.seen.get(&atom.predicate) {
            Some(&(arity, first)) if arity != atom.arity() => Err(ParseError::new(
                ParseErrorKind::ArityClash,
                pos,
                atom.predicate.clone(),
                format!(
                    "predicate {} used with arity {} but with arity {} at {}",
                    atom.predicate,
                    atom.arity(),
                    arity,
                    first
                ),
            )),
            Some(_) => Ok(()),
            None => {
                self.seen.insert(atom.predicate.clone(), (atom.arity(), pos));
                Ok(())
            }
        }
    }

    fn note_rule(&mut self, rule: &Rule) -> Result<(), ParseError> {
        let pos = rule.span.start;
        match &rule.head {
            RuleHead::Atom(l) => self.note(&l.atom, pos)?,
            RuleHead::Falsum => {}
            RuleHead::Choice { elements, .. } => {
                for el in elements {
                    self.note(&el.atom, pos)?;
                    for l in &el.condition {
                        self.note(&l.atom, pos)?;
                    }
                }
            }
        }
        for l in &rule.body {
            self.note(&l.atom, pos)?;
        }
        Ok(())
    }
}

/// Parses a program in the Clingo-compatible fragment.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut parser = Parser::new(text)?;
    let mut arities = ArityTable::default();
    let mut program = Program::default();
    let mut seen_facts = BTreeSet::new();
    while !parser.at_eof() {
        if let TokenKind::Directive(_) = parser.peek_kind() {
            return Err(parser.unexpected("a rule (directives are not part of programs)"));
        }
        let rule = parser.rule()?;
        arities.note_rule(&rule)?;
        check_safety(&rule)?;
        if let (RuleHead::Atom(lit), true) = (&rule.head, rule.body.is_empty()) {
            if lit.atom.is_ground() {
                if let Ok(fact) = eval_atom(&lit.atom, lit.strong_neg, &Default::default()) {
                    if seen_facts.insert(fact.clone()) {
                        program.facts.push(fact);
                    }
                    continue;
                }
            }
        }
        program.rules.push(rule);
    }
    Ok(program)
}

/// Parses an instance file: `#instance <name>.` sections of ground facts.
pub fn parse_instances(text: &str) -> Result<InstanceFamily, ParseError> {
    let mut parser = Parser::new(text)?;
    let mut family = InstanceFamily::new();
    let mut current: Option<(String, BTreeSet<GroundAtom>)> = None;
    while !parser.at_eof() {
        let tok = parser.peek().clone();
        match &tok.kind {
            TokenKind::Directive(d) if d == "instance" => {
                parser.advance();
                let name_tok = parser.advance();
                let name = match name_tok.kind {
                    TokenKind::Ident(n) => n,
                    TokenKind::Int(i) => i.to_string(),
                    other => {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            name_tok.pos,
                            other.describe(),
                            "expected instance name",
                        ))
                    }
                };
                parser.expect(&TokenKind::Dot, "`.` after instance name")?;
                if let Some((n, f)) = current.take() {
                    family.insert(n, f);
                }
                if family.get(&name).is_some() {
                    return Err(ParseError::new(
                        ParseErrorKind::DuplicateInstance,
                        name_tok.pos,
                        name.clone(),
                        format!("duplicate instance name {name}"),
                    ));
                }
                current = Some((name, BTreeSet::new()));
            }
            TokenKind::Directive(d) => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    tok.pos,
                    format!("#{d}"),
                    "unknown directive",
                ))
            }
            _ => {
                let (atom, neg) = parser.classical_atom()?;
                parser.expect(&TokenKind::Dot, "`.` after fact")?;
                let Some((_, facts)) = current.as_mut() else {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        tok.pos,
                        tok.kind.describe(),
                        "fact outside of an #instance section",
                    ));
                };
                if !atom.is_ground() {
                    return Err(ParseError::new(
                        ParseErrorKind::NonGroundFact,
                        tok.pos,
                        atom.predicate.clone(),
                        "instance facts must be ground",
                    ));
                }
                let fact = eval_atom(&atom, neg, &Default::default()).map_err(|e| {
                    ParseError::new(ParseErrorKind::NonGroundFact, tok.pos, atom.predicate.clone(), e.to_string())
                })?;
                facts.insert(fact);
            }
        }
    }
    if let Some((n, f)) = current.take() {
        family.insert(n, f);
    }
    Ok(family)
}

/// Parses a single ground atom such as `-holds(on(a,b),3)`; a trailing `.`
/// is accepted.
pub fn parse_ground_atom(text: &str) -> Result<GroundAtom, ParseError> {
    let mut parser = Parser::new(text)?;
    let atom = parser.ground_atom()?;
    parser.eat(&TokenKind::Dot);
    if !parser.at_eof() {
        return Err(parser.unexpected("end of input"));
    }
    Ok(atom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_propositional_rule() {
        let p = parse_program("needsWater :- habitatWater.").unwrap();
        assert_eq!(p.rules.len(), 1);
        assert!(p.facts.is_empty());
        let rule = &p.rules[0];
        assert_eq!(rule.head, RuleHead::Atom(Literal::positive(Atom::new("needsWater", vec![]))));
        assert_eq!(rule.body, vec![Literal::positive(Atom::new("habitatWater", vec![]))]);
    }

    #[test]
    fn empty_program() {
        let p = parse_program("").unwrap();
        assert!(p.rules.is_empty() && p.facts.is_empty());
        assert!(parse_program("% only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn unsafe_negated_variable() {
        let err = parse_program("p(X) :- not q(X).").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Unsafe);
        assert_eq!(err.token, "X");
        assert_eq!(err.pos, Pos { line: 1, column: 1 });
    }

    #[test]
    fn unsafe_arithmetic_only_variable() {
        let err = parse_program("p(X) :- q(X+1).").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Unsafe);
        // bound by a plain occurrence elsewhere
        parse_program("p(X) :- q(X+1), r(X).").unwrap();
        // the frame axiom binds T through holds/2
        parse_program("holds(F,T+1) :- holds(F,T), not -holds(F,T+1), step(T+1).").unwrap();
    }

    #[test]
    fn choice_with_condition_is_safe() {
        let p = parse_program("1 { occurs(A,T) : action(A) } 1 :- step(T).").unwrap();
        match &p.rules[0].head {
            RuleHead::Choice { lower, upper, elements } => {
                assert_eq!((*lower, *upper), (Some(1), Some(1)));
                assert_eq!(elements.len(), 1);
                assert_eq!(elements[0].condition.len(), 1);
            }
            other => panic!("unexpected head {other:?}"),
        }
        let err = parse_program("{ occurs(A,T) } :- step(T).").unwrap_err();
        assert_eq!(err.token, "A");
    }

    #[test]
    fn ground_rules_without_body_become_facts() {
        let p = parse_program("a. -b. c(1+2). c(3). d :- a.").unwrap();
        let facts: Vec<String> = p.facts.iter().map(|f| f.to_string()).collect();
        assert_eq!(facts, ["a", "-b", "c(3)"]);
        assert_eq!(p.rules.len(), 1);
    }

    #[test]
    fn arity_clash_reports_position() {
        let err = parse_program("p(a).\nq :- p.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ArityClash);
        assert_eq!(err.pos.line, 2);
        assert_eq!(err.token, "p");
    }

    #[test]
    fn constraint_and_bounds() {
        let p = parse_program(":- a, not b.\n0 { p } 0.").unwrap();
        assert_eq!(p.rules[0].head, RuleHead::Falsum);
        let err = parse_program("2 { p; q } 1.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::InvalidBounds);
    }

    #[test]
    fn syntax_error_names_token() {
        let err = parse_program("p :- q r.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!(err.token, "r");
        assert_eq!(err.pos, Pos { line: 1, column: 8 });
        let err = parse_program("not p :- q.").unwrap_err();
        assert_eq!(err.token, "not");
    }

    #[test]
    fn deep_terms_rejected() {
        parse_program("p(f(g(h(a)))).").unwrap();
        let err = parse_program("p(f(g(h(i(a))))).").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TooDeep);
    }

    #[test]
    fn instances_flower() {
        let fam = parse_instances("#instance f1. spiky. habitatWater. headLargerLeaf.").unwrap();
        assert_eq!(fam.len(), 1);
        let names: Vec<String> = fam.get("f1").unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(names, ["habitatWater", "headLargerLeaf", "spiky"]);
    }

    #[test]
    fn instances_empty_and_errors() {
        let fam = parse_instances("#instance a. #instance b.").unwrap();
        assert_eq!(fam.names().collect::<Vec<_>>(), ["a", "b"]);
        assert!(fam.iter().all(|(_, f)| f.is_empty()));

        let err = parse_instances("#instance a. p(X).").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonGroundFact);
        let err = parse_instances("#instance a. #instance a.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateInstance);
        let err = parse_instances("p.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn instance_facts_deduplicated() {
        let fam = parse_instances("#instance a. p. p. q(1). q(1).").unwrap();
        assert_eq!(fam.get("a").unwrap().len(), 2);
    }

    #[test]
    fn ground_atom_parsing() {
        let a = parse_ground_atom("-holds(on(a,b),1+2).").unwrap();
        assert_eq!(a.to_string(), "-holds(on(a,b),3)");
        assert!(parse_ground_atom("p(X)").is_err());
        assert!(parse_ground_atom("p q").is_err());
    }
}
