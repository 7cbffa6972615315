use std::io::{self, Write};

use super::{TreeMatching, TruncatedPwit, XField};

/// Write one tab-separated line per explicit vertex:
/// `word  child-index  weight  x-forward  x-backward  matched`.
///
/// The word is the dot-separated path of 1-based child indices (`root` for
/// the root). `matched` is 1 when the edge to the parent belongs to the
/// matching; for the root it is 1 when the root is matched. Undefined fields
/// are written as `-`.
pub fn write_snapshot<W: Write>(t: &TruncatedPwit, xf: &XField, m: &TreeMatching, mut out: W) -> io::Result<()> {
    if xf.len() != t.len() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "x-field does not fit the tree"));
    }
    writeln!(out, "word\tchild_index\tweight\tx_forward\tx_backward\tmatched")?;
    writeln!(out, "root\t-\t-\t{}\t-\t{}", xf.forward(0), u8::from(m.partner(0).is_some()))?;
    for v in 1..t.len() {
        let word: Vec<String> = t.word(v).iter().map(|j| j.to_string()).collect();
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            word.join("."),
            t.child_index(v),
            t.weight(v),
            xf.forward(v),
            xf.backward(v),
            u8::from(m.edge_matched(t, v) == Some(true)),
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwit::{build_matching, propagate_x, sample_pwit, Boundary};
    use crate::rng::stream;

    #[test]
    fn one_line_per_vertex_and_parseable() {
        let mut rng = stream(1, "snap", 0);
        let t = sample_pwit(3, 2, &mut rng).unwrap();
        let xf = propagate_x(&t, Boundary::LogisticIid, &mut rng).unwrap();
        let m = build_matching(&t, &xf).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&t, &xf, &m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + t.len());
        assert!(lines[1].starts_with("root\t"));
        let cols: Vec<&str> = lines[2].split('\t').collect();
        assert_eq!(cols.len(), 6);
        assert_eq!(cols[0], "1");
        assert_eq!(cols[2].parse::<f64>().unwrap(), t.weight(1));
        assert_eq!(cols[3].parse::<f64>().unwrap(), xf.forward(1));
        let last: Vec<&str> = lines.last().unwrap().split('\t').collect();
        assert_eq!(last[0], "2.2.2");
    }
}
