use std::fmt;

use super::{ArithOp, Atom, ChoiceElementSyntax, Literal, Program, Rule, RuleHead, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(c) => f.write_str(c),
            Term::Int(i) => write!(f, "{i}"),
            Term::Variable(v) => f.write_str(v),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Term::Arith(l, op, r) => {
                let op = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                };
                // left-associative: only a nested right operand needs parentheses
                if matches!(**r, Term::Arith(..)) {
                    write!(f, "{l}{op}({r})")
                } else {
                    write!(f, "{l}{op}{r}")
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.default_neg {
            f.write_str("not ")?;
        }
        if self.strong_neg {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

fn write_literals(f: &mut fmt::Formatter<'_>, lits: &[Literal]) -> fmt::Result {
    for (i, l) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

impl fmt::Display for ChoiceElementSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strong_neg {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)?;
        if !self.condition.is_empty() {
            f.write_str(" : ")?;
            write_literals(f, &self.condition)?;
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            RuleHead::Atom(l) => write!(f, "{l}")?,
            RuleHead::Falsum => {}
            RuleHead::Choice { lower, upper, elements } => {
                if let Some(l) = lower {
                    write!(f, "{l} ")?;
                }
                f.write_str("{ ")?;
                for (i, el) in elements.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{el}")?;
                }
                f.write_str(" }")?;
                if let Some(u) = upper {
                    write!(f, " {u}")?;
                }
            }
        }
        if !self.body.is_empty() || matches!(self.head, RuleHead::Falsum) {
            f.write_str(if matches!(self.head, RuleHead::Falsum) { ":- " } else { " :- " })?;
            write_literals(f, &self.body)?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "{fact}.")?;
        }
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_program, Span};
    use super::*;

    fn strip(mut p: Program) -> Program {
        for r in &mut p.rules {
            r.span = Span::default();
        }
        p
    }

    #[test]
    fn printed_program_reparses() {
        let src = "1 { occurs(A,T) : action(A), not blocked(A) ; idle(T) } 1 :- step(T).\n\
                   holds(F,T+1) :- holds(F,T), not -holds(F,T+1), step(T).\n\
                   :- occurs(move(B,L),T), unclear(B,T).\n\
                   p(X-(1+2)) :- q(X).\n\
                   -a. b(-3).";
        let parsed = parse_program(src).unwrap();
        let printed = parsed.to_string();
        assert_eq!(strip(parse_program(&printed).unwrap()), strip(parsed));
    }

    #[test]
    fn constraint_with_empty_body_prints_reparseably() {
        let parsed = parse_program(":- .").unwrap();
        assert_eq!(parsed.to_string(), ":- .\n");
        assert_eq!(strip(parse_program(&parsed.to_string()).unwrap()), strip(parsed));
    }
}
