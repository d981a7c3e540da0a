//! Nested call-expression notation: `name(arg, arg)`. Leaves may be written
//! with or without the empty parentheses; the canonical form always has
//! them.

use super::kind::ValueKind;
use super::primitive::PrimitiveSet;
use super::tree::ProgramTree;
use super::ProgramError;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    pset: &'a PrimitiveSet,
    out: Vec<u8>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ProgramError {
        match self.src.get(self.pos) {
            None => ProgramError::Unbalanced { pos: self.pos },
            Some(&c) => ProgramError::Unexpected {
                found: format!("`{}`", c as char),
                pos: self.pos,
            },
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str), ProgramError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        Ok((start, name))
    }

    fn expr(&mut self, slot: ValueKind) -> Result<(), ProgramError> {
        let (start, name) = self.ident()?;
        let sig = self.pset.lookup(name).ok_or_else(|| ProgramError::UnknownPrimitive {
            name: name.to_string(),
            pos: start,
        })?;
        if !slot.accepts(sig.return_kind) {
            return Err(ProgramError::KindMismatch {
                name: name.to_string(),
                pos: start,
                expected: slot,
                found: sig.return_kind,
            });
        }
        self.out.push(sig.opcode);
        let arity_error = |found| ProgramError::Arity {
            name: name.to_string(),
            pos: start,
            expected: sig.arity(),
            found,
        };
        if self.peek() != Some(b'(') {
            return if sig.is_leaf() { Ok(()) } else { Err(arity_error(0)) };
        }
        self.pos += 1;
        let mut found = 0;
        if self.peek() == Some(b')') {
            self.pos += 1;
        } else {
            loop {
                match sig.arg_kinds.get(found) {
                    Some(&kind) => self.expr(kind)?,
                    None => {
                        // count the surplus arguments for the error message
                        let mut extra = self.clone_for_count();
                        return Err(arity_error(found + extra.count_args()));
                    }
                }
                found += 1;
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.unexpected()),
                }
            }
        }
        if found != sig.arity() {
            return Err(arity_error(found));
        }
        Ok(())
    }

    fn clone_for_count(&self) -> Counter<'a> {
        Counter {
            src: self.src,
            pos: self.pos,
        }
    }
}

/// Counts comma-separated arguments up to the closing parenthesis without
/// interpreting them.
struct Counter<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Counter<'_> {
    fn count_args(&mut self) -> usize {
        let mut depth = 0usize;
        let mut count = 1;
        while let Some(&c) = self.src.get(self.pos) {
            match c {
                b'(' => depth += 1,
                b')' if depth == 0 => break,
                b')' => depth -= 1,
                b',' if depth == 0 => count += 1,
                _ => {}
            }
            self.pos += 1;
        }
        count
    }
}

/// Parses program text into a kind-correct tree rooted at the set's root
/// kind.
pub fn parse_program(text: &str, pset: &PrimitiveSet) -> Result<ProgramTree, ProgramError> {
    let mut depth: isize = 0;
    for (i, c) in text.bytes().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(ProgramError::Unbalanced { pos: i });
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(ProgramError::Unbalanced { pos: text.len() });
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        pset,
        out: Vec::new(),
    };
    parser.expr(pset.root_kind())?;
    if parser.peek().is_some() {
        return Err(parser.unexpected());
    }
    Ok(ProgramTree::from_prefix_unchecked(parser.out))
}

/// Canonical text: `name(arg, arg)`, leaves as `name()`.
pub fn serialize_program(tree: &ProgramTree, pset: &PrimitiveSet) -> String {
    fn emit(nodes: &[u8], pos: &mut usize, pset: &PrimitiveSet, out: &mut String) {
        let sig = pset.signature(nodes[*pos]);
        *pos += 1;
        out.push_str(&sig.name);
        out.push('(');
        for i in 0..sig.arity() {
            if i > 0 {
                out.push_str(", ");
            }
            emit(nodes, pos, pset, out);
        }
        out.push(')');
    }
    let mut out = String::new();
    let mut pos = 0;
    emit(tree.nodes(), &mut pos, pset, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{default_primitive_set, random_program};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn listing_program() {
        let pset = default_primitive_set();
        let t = parse_program("testing_output_write(testing_input_min())", &pset).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.height(&pset), 1);
    }

    #[test]
    fn count_program_round_trip() {
        let pset = default_primitive_set();
        let text = "testing_output_write(get_testing_length_input_x())";
        let t = parse_program(text, &pset).unwrap();
        assert_eq!(serialize_program(&t, &pset), text);
    }

    #[test]
    fn whitespace_and_bare_leaves() {
        let pset = default_primitive_set();
        let t = parse_program(
            "comparison(\n    bigger_thanW(input_max(), output_read),\n    testing_output_write( testing_input_min() ),\n    testing_output_write(testing_input_max())\n)",
            &pset,
        )
        .unwrap();
        assert_eq!(
            serialize_program(&t, &pset),
            "comparison(bigger_thanW(input_max(), output_read()), testing_output_write(testing_input_min()), testing_output_write(testing_input_max()))"
        );
        let bare = parse_program("prog2(no_op, testing_output_write(get0))", &pset).unwrap();
        assert_eq!(
            serialize_program(&bare, &pset),
            "prog2(no_op(), testing_output_write(get0()))"
        );
    }

    #[test]
    fn leaf_renders_with_parens() {
        let pset = default_primitive_set();
        let t = parse_program("no_op()", &pset).unwrap();
        assert_eq!(serialize_program(&t, &pset), "no_op()");
    }

    #[test]
    fn arity_error() {
        let pset = default_primitive_set();
        let err = parse_program("loop(get_testing_length_input_x())", &pset).unwrap_err();
        assert_eq!(
            err,
            ProgramError::Arity {
                name: "loop".into(),
                pos: 0,
                expected: 2,
                found: 1
            }
        );
        let err = parse_program("prog2(no_op(), no_op(), no_op())", &pset).unwrap_err();
        assert!(matches!(err, ProgramError::Arity { expected: 2, found: 3, .. }), "{err:?}");
        let err = parse_program("prog2", &pset).unwrap_err();
        assert!(matches!(err, ProgramError::Arity { found: 0, .. }));
    }

    #[test]
    fn kind_error_with_position() {
        let pset = default_primitive_set();
        let err = parse_program(
            "testing_output_write(bigger_thanW(input_max(), output_read()))",
            &pset,
        )
        .unwrap_err();
        assert_eq!(
            err,
            ProgramError::KindMismatch {
                name: "bigger_thanW".into(),
                pos: 21,
                expected: ValueKind::RInteger,
                found: ValueKind::Boolean
            }
        );
        // root must be an Operation
        assert!(matches!(
            parse_program("get0()", &pset),
            Err(ProgramError::KindMismatch { pos: 0, .. })
        ));
    }

    #[test]
    fn unknown_and_unbalanced() {
        let pset = default_primitive_set();
        assert_eq!(
            parse_program("prog2(no_op(), frobnicate())", &pset).unwrap_err(),
            ProgramError::UnknownPrimitive {
                name: "frobnicate".into(),
                pos: 15
            }
        );
        assert!(matches!(
            parse_program("prog2(no_op(), no_op()", &pset),
            Err(ProgramError::Unbalanced { pos: 22 })
        ));
        assert!(matches!(
            parse_program("no_op())", &pset),
            Err(ProgramError::Unbalanced { pos: 7 })
        ));
        assert!(matches!(
            parse_program("no_op() no_op()", &pset),
            Err(ProgramError::Unexpected { pos: 8, .. })
        ));
        assert!(parse_program("", &pset).is_err());
    }

    #[test]
    fn round_trip_fuzz() {
        let pset = default_primitive_set();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10_000 {
            let t = random_program(&pset, &mut rng, 1, 6);
            let text = serialize_program(&t, &pset);
            assert_eq!(parse_program(&text, &pset).unwrap(), t);
        }
    }
}
