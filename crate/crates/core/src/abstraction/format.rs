use crate::error::{ParseError, ParseErrorKind};
use crate::syntax::{Parser, TokenKind};

use super::{AbstractionMapping, Cluster};

/// Parses a `.map` file:
///
/// ```text
/// remove spiky.
/// cluster habitatWater, habitatMud => habitatWaterOrMud.
/// ```
///
/// Only syntax is checked here; see [`AbstractionMapping::validate`].
pub fn parse_mapping(text: &str) -> Result<AbstractionMapping, ParseError> {
    let mut parser = Parser::new(text)?;
    let mut mapping = AbstractionMapping::identity();
    while !parser.at_eof() {
        if parser.is_keyword("remove") {
            parser.advance();
            mapping.removals.push(parser.ground_atom()?);
        } else if parser.is_keyword("cluster") {
            let kw = parser.advance();
            let mut sources = vec![parser.ground_atom()?];
            while parser.eat(&TokenKind::Comma) {
                sources.push(parser.ground_atom()?);
            }
            parser.expect(&TokenKind::Arrow, "`=>`")?;
            let target = parser.ground_atom()?;
            if sources.len() < 2 {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    kw.pos,
                    "cluster",
                    "a cluster needs at least two source atoms",
                ));
            }
            mapping.clusters.push(Cluster { sources, target });
        } else {
            return Err(parser.unexpected("`remove` or `cluster`"));
        }
        parser.expect(&TokenKind::Dot, "`.`")?;
    }
    Ok(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_mapping_round_trips() {
        let text = "remove spiky.\ncluster habitatWater, habitatMud => habitatWaterOrMud.\n";
        let m = parse_mapping(text).unwrap();
        assert_eq!(m.removals.len(), 1);
        assert_eq!(m.clusters[0].sources.len(), 2);
        assert_eq!(m.to_string(), text);
        assert_eq!(parse_mapping(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn compound_and_negated_atoms() {
        let text = "% comment\ncluster -shape(c1,cylindrical), -shape(c1,padded) => -shape(c1,cylindricalOrPadded).\nremove flower(c1,yes).";
        let m = parse_mapping(text).unwrap();
        assert_eq!(m.clusters[0].target.to_string(), "-shape(c1,cylindricalOrPadded)");
        assert_eq!(parse_mapping(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn empty_file_is_identity() {
        assert!(parse_mapping("").unwrap().is_identity());
        assert!(parse_mapping("% nothing\n").unwrap().is_identity());
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_mapping("remove p").is_err());
        assert!(parse_mapping("cluster p => q.").is_err());
        assert!(parse_mapping("cluster p, q q.").is_err());
        assert!(parse_mapping("drop p.").is_err());
        let err = parse_mapping("remove p(X).").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonGroundFact);
    }
}
