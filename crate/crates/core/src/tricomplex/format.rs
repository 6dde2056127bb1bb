//! Text format for triangulations.
//!
//! ```text
//! tri <name>
//! tets <n>
//! <i>: <j0> <p0> <j1> <p1> <j2> <p2> <j3> <p3>
//! ```
//!
//! Face `f` of tetrahedron `i` glues to tetrahedron `jf` with permutation
//! `pf`, written as the four digits of the image of 0,1,2,3. An unglued face
//! is written `- -`. Tokens are whitespace-separated and `#` starts a
//! comment running to end of line. Writing then parsing is the identity, and
//! parsing a canonical file reproduces it byte for byte.

use super::{Gluing, TetFaces, TriError, Triangulation};
use crate::perm::Perm4;

pub fn write_tri(t: &Triangulation) -> String {
    let mut out = String::new();
    let name: String = t
        .name()
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect();
    let name = if name.is_empty() {
        "unnamed".to_string()
    } else {
        name
    };
    out.push_str(&format!("tri {name}\n"));
    out.push_str(&format!("tets {}\n", t.tet_count()));
    for (i, faces) in t.tets().iter().enumerate() {
        out.push_str(&format!("{i}:"));
        for g in faces {
            match g {
                Some(g) => out.push_str(&format!(" {} {}", g.tet, g.perm.digits())),
                None => out.push_str(" - -"),
            }
        }
        out.push('\n');
    }
    out
}

struct Tokens<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self) -> Result<&'a str, TriError> {
        let tok = self
            .toks
            .get(self.pos)
            .copied()
            .ok_or_else(|| TriError::Parse("unexpected end of input".to_string()))?;
        self.pos += 1;
        Ok(tok)
    }
}

pub fn parse_tri(text: &str) -> Result<Triangulation, TriError> {
    let mut tokens: Vec<&str> = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        tokens.extend(line.split_whitespace());
    }
    let mut t = Tokens {
        toks: tokens,
        pos: 0,
    };

    if t.next()? != "tri" {
        return Err(TriError::Parse("expected header 'tri <name>'".to_string()));
    }
    let name = t.next()?.to_string();
    if t.next()? != "tets" {
        return Err(TriError::Parse("expected 'tets <n>'".to_string()));
    }
    let n: usize = t.next()?
        .parse()
        .map_err(|_| TriError::Parse("bad tetrahedron count".to_string()))?;

    let mut tets: Vec<TetFaces> = Vec::with_capacity(n);
    for i in 0..n {
        let label = t.next()?;
        if label != format!("{i}:") {
            return Err(TriError::Parse(format!(
                "expected row label '{i}:', found '{label}'"
            )));
        }
        let mut faces: TetFaces = [None; 4];
        for face in faces.iter_mut() {
            let jt = t.next()?;
            let pt = t.next()?;
            if jt == "-" {
                if pt != "-" {
                    return Err(TriError::Parse(format!(
                        "unglued face must be written '- -', found '- {pt}'"
                    )));
                }
                continue;
            }
            let tet: usize = jt
                .parse()
                .map_err(|_| TriError::Parse(format!("bad tetrahedron index '{jt}'")))?;
            let perm = Perm4::parse(pt)
                .ok_or_else(|| TriError::Parse(format!("bad permutation '{pt}'")))?;
            *face = Some(Gluing { tet, perm });
        }
        tets.push(faces);
    }
    if t.pos != t.toks.len() {
        return Err(TriError::Parse(format!(
            "trailing input starting at '{}'",
            t.toks[t.pos]
        )));
    }
    Ok(Triangulation::new(name, tets))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let t = Triangulation::boundary_four_simplex();
        let text = write_tri(&t);
        let back = parse_tri(&text).unwrap();
        assert_eq!(t, back);
        assert_eq!(back.name(), "boundary-4-simplex");
        // canonical text reparses byte for byte
        assert_eq!(write_tri(&back), text);
    }

    #[test]
    fn comments_and_whitespace_ignored() {
        let t = Triangulation::boundary_four_simplex();
        let text = write_tri(&t);
        let noisy = format!("# header comment\n{}\n# trailing\n", text.replace(' ', "\t"));
        assert_eq!(parse_tri(&noisy).unwrap(), t);
    }

    #[test]
    fn unglued_faces_round_trip() {
        let t = Triangulation::new("open", vec![[None; 4]]);
        let text = write_tri(&t);
        assert_eq!(parse_tri(&text).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_tri("").is_err());
        assert!(parse_tri("tri x\ntets 1\n0: 0 0123 0 0123 0 0123").is_err());
        assert!(parse_tri("tri x\ntets 1\n0: 0 0103 0 0123 0 0123 0 0123").is_err());
    }
}
