//! OBJ-style mesh text: `o` object records, `v` vertices, `f` faces with
//! 1-based global indices. A small parser backs the round-trip tests.

use std::fmt::Write as _;

use crooked_core::crooked::{Mesh, MeshPart};

fn part_name(part: MeshPart) -> &'static str {
    match part {
        MeshPart::StemFuture => "stem_future",
        MeshPart::StemPast => "stem_past",
        MeshPart::WingPlus => "wing_plus",
        MeshPart::WingMinus => "wing_minus",
    }
}

/// Serialize named meshes into one OBJ document.
pub fn write_obj(meshes: &[(String, Mesh)]) -> String {
    let mut out = String::new();
    let mut offset = 1usize; // OBJ indices are 1-based
    for (name, mesh) in meshes {
        let _ = writeln!(out, "o {name}");
        for v in &mesh.vertices {
            let _ = writeln!(out, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2]);
        }
        for (part, range) in &mesh.parts {
            let _ = writeln!(out, "g {name}_{}", part_name(*part));
            for face in &mesh.faces[range.clone()] {
                let _ = writeln!(
                    out,
                    "f {} {} {}",
                    face[0] + offset,
                    face[1] + offset,
                    face[2] + offset
                );
            }
        }
        offset += mesh.vertices.len();
    }
    out
}

/// Parsed document: vertices and faces with global 0-based indexing.
#[derive(Debug, Default, PartialEq)]
pub struct ParsedObj {
    pub objects: Vec<String>,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

pub fn parse_obj(text: &str) -> Result<ParsedObj, String> {
    let mut out = ParsedObj::default();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("o") => out
                .objects
                .push(it.next().ok_or_else(|| format!("line {}: bare o", idx + 1))?.to_string()),
            Some("g") => {}
            Some("v") => {
                let mut v = [0.0; 3];
                for slot in v.iter_mut() {
                    *slot = it
                        .next()
                        .ok_or_else(|| format!("line {}: short vertex", idx + 1))?
                        .parse()
                        .map_err(|e| format!("line {}: {e}", idx + 1))?;
                }
                out.vertices.push(v);
            }
            Some("f") => {
                let mut f = [0usize; 3];
                for slot in f.iter_mut() {
                    let raw: usize = it
                        .next()
                        .ok_or_else(|| format!("line {}: short face", idx + 1))?
                        .parse()
                        .map_err(|e| format!("line {}: {e}", idx + 1))?;
                    if raw == 0 || raw > out.vertices.len() {
                        return Err(format!("line {}: face index {raw} out of range", idx + 1));
                    }
                    *slot = raw - 1;
                }
                out.faces.push(f);
            }
            Some(other) => return Err(format!("line {}: unknown record `{other}`", idx + 1)),
            None => {}
        }
    }
    Ok(out)
}
