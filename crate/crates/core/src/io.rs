//! Graph file formats.
//!
//! Text inputs (`.el`, `.wel`, `.graph`, `.mtx`) parse into an [`EdgeList`];
//! built graphs serialize to a little-endian binary layout (`.sg`, `.wsg`):
//!
//! ```text
//! "GAPB"  u8 version=1  u8 flags (bit0 directed, bit1 weighted)  u64 n  u64 m
//! out_offsets (n+1) x u64   out_neighbors m x u32   [out_weights m x i32]
//! if directed: in_offsets (n+1) x u64   in_neighbors m x u32   [in_weights m x i32]
//! ```

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use log::warn;
use thiserror::Error;

use crate::graph::{build_csr, BuildError, CsrGraph, EdgeList, NodeId, Weight};

pub const MAGIC: &[u8; 4] = b"GAPB";
pub const FORMAT_VERSION: u8 = 1;
const FLAG_DIRECTED: u8 = 1;
const FLAG_WEIGHTED: u8 = 2;

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(
        "cannot infer graph format from {0:?} (expected .el, .wel, .graph, .mtx, .sg or .wsg)"
    )]
    UnknownFormat(PathBuf),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a serialized graph (bad magic bytes)")]
    BadMagic,
    #[error("unsupported serialized graph version {0}")]
    VersionMismatch(u8),
    #[error("serialized graph truncated while reading {0}")]
    Truncated(&'static str),
    #[error("unexpected bytes after the end of the serialized graph")]
    TrailingBytes,
    #[error("{0} is not a text format")]
    NotText(GraphFileFormat),
    #[error("{0} is not a serialized graph format")]
    NotSerialized(GraphFileFormat),
    #[error("a {0} file cannot hold a {1} graph")]
    WeightednessMismatch(GraphFileFormat, &'static str),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFileFormat {
    EdgeListText,
    WeightedEdgeListText,
    Metis,
    MatrixMarket,
    SerializedBinary,
    SerializedWeightedBinary,
}

impl GraphFileFormat {
    pub fn from_path(path: &Path) -> Result<Self, GraphIoError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        Ok(match ext {
            "el" => Self::EdgeListText,
            "wel" => Self::WeightedEdgeListText,
            "graph" => Self::Metis,
            "mtx" => Self::MatrixMarket,
            "sg" => Self::SerializedBinary,
            "wsg" => Self::SerializedWeightedBinary,
            _ => return Err(GraphIoError::UnknownFormat(path.to_path_buf())),
        })
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::EdgeListText => "el",
            Self::WeightedEdgeListText => "wel",
            Self::Metis => "graph",
            Self::MatrixMarket => "mtx",
            Self::SerializedBinary => "sg",
            Self::SerializedWeightedBinary => "wsg",
        }
    }

    pub fn is_serialized(self) -> bool {
        matches!(
            self,
            Self::SerializedBinary | Self::SerializedWeightedBinary
        )
    }
}

impl std::fmt::Display for GraphFileFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, ".{}", self.extension())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphIoError {
    GraphIoError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<u64, GraphIoError> {
    if tok.starts_with('-') {
        return Err(parse_err(line, format!("negative vertex id {tok}")));
    }
    tok.parse::<u64>()
        .map_err(|_| parse_err(line, format!("invalid vertex id {tok:?}")))
}

fn parse_weight(tok: &str, line: usize) -> Result<Weight, GraphIoError> {
    tok.parse::<Weight>()
        .map_err(|_| parse_err(line, format!("invalid weight {tok:?}")))
}

fn push(
    el: &mut EdgeList,
    u: u64,
    v: u64,
    w: Option<Weight>,
    line: usize,
) -> Result<(), GraphIoError> {
    el.push(u, v, w).map_err(|e| parse_err(line, e.to_string()))
}

fn one_based(id: u64, line: usize) -> Result<u64, GraphIoError> {
    id.checked_sub(1)
        .ok_or_else(|| parse_err(line, "vertex ids are 1-based; found 0"))
}

/// Reads a text graph file. Ids come back 0-based.
pub fn read_text_graph(path: &Path, format: GraphFileFormat) -> Result<EdgeList, GraphIoError> {
    let reader = BufReader::new(File::open(path)?);
    parse_text(reader, format)
}

pub fn parse_text<R: BufRead>(
    reader: R,
    format: GraphFileFormat,
) -> Result<EdgeList, GraphIoError> {
    match format {
        GraphFileFormat::EdgeListText => parse_edge_list(reader, false),
        GraphFileFormat::WeightedEdgeListText => parse_edge_list(reader, true),
        GraphFileFormat::Metis => parse_metis(reader),
        GraphFileFormat::MatrixMarket => parse_matrix_market(reader),
        other => Err(GraphIoError::NotText(other)),
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

fn parse_edge_list<R: BufRead>(reader: R, weighted: bool) -> Result<EdgeList, GraphIoError> {
    let mut el = if weighted {
        EdgeList::new_weighted()
    } else {
        EdgeList::new()
    };
    let expected = if weighted { 3 } else { 2 };
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != expected {
            return Err(parse_err(
                line_no,
                format!("expected {expected} fields, found {}", fields.len()),
            ));
        }
        let u = parse_id(fields[0], line_no)?;
        let v = parse_id(fields[1], line_no)?;
        let w = if weighted {
            Some(parse_weight(fields[2], line_no)?)
        } else {
            None
        };
        push(&mut el, u, v, w, line_no)?;
    }
    Ok(el)
}

/// METIS adjacency format: a header `n m [fmt [ncon]]`, then one line per
/// vertex listing its 1-based neighbors. Blank lines are vertices without
/// neighbors, so only `%` lines are skipped after the header.
fn parse_metis<R: BufRead>(reader: R) -> Result<EdgeList, GraphIoError> {
    let mut lines = reader.lines().enumerate();
    let (header_no, header) = loop {
        match lines.next() {
            None => return Err(parse_err(1, "missing METIS header")),
            Some((i, line)) => {
                let line = line?;
                let t = line.trim();
                if !t.is_empty() && !t.starts_with('%') {
                    break (i + 1, t.to_string());
                }
            }
        }
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields.len() > 4 {
        return Err(parse_err(
            header_no,
            "METIS header must be `n m [fmt [ncon]]`",
        ));
    }
    let n = parse_id(fields[0], header_no)?;
    let declared_edges = parse_id(fields[1], header_no)?;
    let fmt = fields.get(2).copied().unwrap_or("0");
    if fmt.len() > 3 || !fmt.chars().all(|c| c == '0' || c == '1') {
        return Err(parse_err(header_no, format!("invalid METIS fmt {fmt:?}")));
    }
    let fmt = format!("{fmt:0>3}");
    let has_sizes = &fmt[0..1] == "1";
    let has_vertex_weights = &fmt[1..2] == "1";
    let has_edge_weights = &fmt[2..3] == "1";
    let ncon = match fields.get(3) {
        Some(tok) => parse_id(tok, header_no)? as usize,
        None if has_vertex_weights => 1,
        None => 0,
    };
    let skip = has_sizes as usize + if has_vertex_weights { ncon } else { 0 };

    let mut el = if has_edge_weights {
        EdgeList::new_weighted()
    } else {
        EdgeList::new()
    };
    let mut vertex = 0u64;
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line?;
        let t = line.trim();
        if t.starts_with('%') {
            continue;
        }
        if vertex >= n {
            if t.is_empty() {
                continue;
            }
            return Err(parse_err(line_no, format!("more than {n} vertex lines")));
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() < skip {
            return Err(parse_err(line_no, "missing vertex size/weight fields"));
        }
        let rest = &toks[skip..];
        if has_edge_weights {
            if !rest.len().is_multiple_of(2) {
                return Err(parse_err(line_no, "neighbor without edge weight"));
            }
            for pair in rest.chunks(2) {
                let v = one_based(parse_id(pair[0], line_no)?, line_no)?;
                let w = parse_weight(pair[1], line_no)?;
                push(&mut el, vertex, v, Some(w), line_no)?;
            }
        } else {
            for tok in rest {
                let v = one_based(parse_id(tok, line_no)?, line_no)?;
                push(&mut el, vertex, v, None, line_no)?;
            }
        }
        vertex += 1;
    }
    if el.len() as u64 != 2 * declared_edges {
        warn!(
            "METIS header declares {declared_edges} edges but {} adjacency entries were read",
            el.len()
        );
    }
    el.set_num_nodes(n);
    el.set_symmetric(true);
    Ok(el)
}

fn parse_matrix_market<R: BufRead>(reader: R) -> Result<EdgeList, GraphIoError> {
    let mut lines = reader.lines().enumerate();
    let banner = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(parse_err(1, "empty Matrix Market file")),
    };
    let banner = banner.to_ascii_lowercase();
    let tokens: Vec<&str> = banner.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "missing %%MatrixMarket matrix banner"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, "only coordinate matrices are supported"));
    }
    let weighted = match tokens[3] {
        "pattern" => false,
        "integer" | "real" => true,
        other => return Err(parse_err(1, format!("unsupported field type {other}"))),
    };
    let real = tokens[3] == "real";
    let symmetric = match tokens[4] {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry {other}"))),
    };

    let mut el = if weighted {
        EdgeList::new_weighted()
    } else {
        EdgeList::new()
    };
    let mut size: Option<(u64, u64)> = None;
    let mut truncated = false;
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        let Some((rows, cols)) = size else {
            if f.len() != 3 {
                return Err(parse_err(line_no, "size line must be `rows cols entries`"));
            }
            size = Some((parse_id(f[0], line_no)?, parse_id(f[1], line_no)?));
            continue;
        };
        let expected = if weighted { 3 } else { 2 };
        if f.len() != expected {
            return Err(parse_err(
                line_no,
                format!("expected {expected} fields, found {}", f.len()),
            ));
        }
        let u = one_based(parse_id(f[0], line_no)?, line_no)?;
        let v = one_based(parse_id(f[1], line_no)?, line_no)?;
        if u >= rows || v >= cols {
            return Err(parse_err(line_no, "entry outside the declared matrix size"));
        }
        let w = if !weighted {
            None
        } else if real {
            let x: f64 = f[2]
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid value {:?}", f[2])))?;
            if x.fract() != 0.0 {
                truncated = true;
            }
            Some(x.trunc() as Weight)
        } else {
            Some(parse_weight(f[2], line_no)?)
        };
        push(&mut el, u, v, w, line_no)?;
    }
    let Some((rows, cols)) = size else {
        return Err(parse_err(1, "missing size line"));
    };
    if truncated {
        warn!("real-valued Matrix Market weights truncated to integers");
    }
    el.set_num_nodes(rows.max(cols));
    el.set_symmetric(symmetric);
    Ok(el)
}

const CHUNK: usize = 1 << 16;

fn write_u64s<W: Write>(w: &mut W, xs: &[u64]) -> io::Result<()> {
    let mut buf = Vec::with_capacity(CHUNK * 8);
    for chunk in xs.chunks(CHUNK) {
        buf.clear();
        chunk
            .iter()
            .for_each(|x| buf.extend_from_slice(&x.to_le_bytes()));
        w.write_all(&buf)?;
    }
    Ok(())
}

fn write_u32s<W: Write>(w: &mut W, xs: &[u32]) -> io::Result<()> {
    let mut buf = Vec::with_capacity(CHUNK * 4);
    for chunk in xs.chunks(CHUNK) {
        buf.clear();
        chunk
            .iter()
            .for_each(|x| buf.extend_from_slice(&x.to_le_bytes()));
        w.write_all(&buf)?;
    }
    Ok(())
}

fn write_i32s<W: Write>(w: &mut W, xs: &[i32]) -> io::Result<()> {
    let mut buf = Vec::with_capacity(CHUNK * 4);
    for chunk in xs.chunks(CHUNK) {
        buf.clear();
        chunk
            .iter()
            .for_each(|x| buf.extend_from_slice(&x.to_le_bytes()));
        w.write_all(&buf)?;
    }
    Ok(())
}

/// Writes the binary layout described in the module docs.
pub fn write_serialized_to<W: Write>(g: &CsrGraph, w: &mut W) -> io::Result<()> {
    let mut flags = 0;
    if g.is_directed() {
        flags |= FLAG_DIRECTED;
    }
    if g.is_weighted() {
        flags |= FLAG_WEIGHTED;
    }
    w.write_all(MAGIC)?;
    w.write_all(&[FORMAT_VERSION, flags])?;
    w.write_all(&(g.num_nodes() as u64).to_le_bytes())?;
    w.write_all(&(g.num_edges() as u64).to_le_bytes())?;
    let mut sides = vec![g.outgoing()];
    if g.is_directed() {
        sides.push(g.incoming());
    }
    for adj in sides {
        write_u64s(w, adj.offsets())?;
        write_u32s(w, adj.neighbors())?;
        if let Some(ws) = adj.weights() {
            write_i32s(w, ws)?;
        }
    }
    Ok(())
}

/// Serializes `g` to `path`. The extension must be `.sg` for unweighted
/// graphs and `.wsg` for weighted ones.
pub fn write_serialized(g: &CsrGraph, path: &Path) -> Result<(), GraphIoError> {
    let format = GraphFileFormat::from_path(path)?;
    match (format, g.is_weighted()) {
        (GraphFileFormat::SerializedBinary, false)
        | (GraphFileFormat::SerializedWeightedBinary, true) => {}
        (GraphFileFormat::SerializedBinary, true) => {
            return Err(GraphIoError::WeightednessMismatch(format, "weighted"))
        }
        (GraphFileFormat::SerializedWeightedBinary, false) => {
            return Err(GraphIoError::WeightednessMismatch(format, "unweighted"))
        }
        (other, _) => return Err(GraphIoError::NotSerialized(other)),
    }
    let mut w = BufWriter::new(File::create(path)?);
    write_serialized_to(g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn read_exact_or<R: Read>(
    r: &mut R,
    buf: &mut [u8],
    what: &'static str,
) -> Result<(), GraphIoError> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => GraphIoError::Truncated(what),
        _ => GraphIoError::Io(e),
    })
}

fn read_array<R: Read, T, const N: usize>(
    r: &mut R,
    len: usize,
    what: &'static str,
    decode: fn([u8; N]) -> T,
) -> Result<Vec<T>, GraphIoError> {
    let mut out = Vec::new();
    out.try_reserve_exact(len)
        .map_err(|_| GraphIoError::Truncated(what))?;
    let mut buf = vec![0u8; CHUNK * N];
    let mut remaining = len;
    while remaining > 0 {
        let take = remaining.min(CHUNK);
        let bytes = &mut buf[..take * N];
        read_exact_or(r, bytes, what)?;
        out.extend(
            bytes
                .chunks_exact(N)
                .map(|c| decode(c.try_into().expect("chunk size"))),
        );
        remaining -= take;
    }
    Ok(out)
}

pub fn read_serialized_from<R: Read>(r: &mut R) -> Result<CsrGraph, GraphIoError> {
    let mut magic = [0u8; 4];
    read_exact_or(r, &mut magic, "magic").map_err(|_| GraphIoError::BadMagic)?;
    if &magic != MAGIC {
        return Err(GraphIoError::BadMagic);
    }
    let mut vf = [0u8; 2];
    read_exact_or(r, &mut vf, "header")?;
    if vf[0] != FORMAT_VERSION {
        return Err(GraphIoError::VersionMismatch(vf[0]));
    }
    let directed = vf[1] & FLAG_DIRECTED != 0;
    let weighted = vf[1] & FLAG_WEIGHTED != 0;
    let mut word = [0u8; 8];
    read_exact_or(r, &mut word, "header")?;
    let n = u64::from_le_bytes(word);
    read_exact_or(r, &mut word, "header")?;
    let m = u64::from_le_bytes(word);
    let n = usize::try_from(n).map_err(|_| GraphIoError::Truncated("header"))?;
    let m = usize::try_from(m).map_err(|_| GraphIoError::Truncated("header"))?;

    let read_side = |r: &mut R, names: [&'static str; 3]| -> Result<_, GraphIoError> {
        let offsets = read_array(r, n + 1, names[0], u64::from_le_bytes)?;
        let neighbors: Vec<NodeId> = read_array(r, m, names[1], u32::from_le_bytes)?;
        let weights = if weighted {
            Some(read_array(r, m, names[2], i32::from_le_bytes)?)
        } else {
            None
        };
        Ok((offsets, neighbors, weights))
    };
    let (out_offsets, out_neighbors, out_weights) =
        read_side(r, ["out_offsets", "out_neighbors", "out_weights"])?;
    let incoming = if directed {
        Some(read_side(r, ["in_offsets", "in_neighbors", "in_weights"])?)
    } else {
        None
    };
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(GraphIoError::TrailingBytes);
    }
    Ok(CsrGraph::from_parts(
        directed,
        out_offsets,
        out_neighbors,
        out_weights,
        incoming,
    )?)
}

pub fn read_serialized(path: &Path) -> Result<CsrGraph, GraphIoError> {
    let mut r = BufReader::new(File::open(path)?);
    read_serialized_from(&mut r)
}

/// Loads any supported file. Text formats are built directed unless
/// `symmetrize` is set (or the format itself is symmetric); serialized
/// graphs are returned as stored, symmetrized on request.
pub fn load_graph(path: &Path, symmetrize: bool) -> Result<CsrGraph, GraphIoError> {
    let format = GraphFileFormat::from_path(path)?;
    if format.is_serialized() {
        let g = read_serialized(path)?;
        return Ok(if symmetrize { g.symmetrized() } else { g });
    }
    let el = read_text_graph(path, format)?;
    Ok(build_csr(&el, true, symmetrize)?)
}
