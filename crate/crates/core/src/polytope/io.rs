//! Mesh ingestion: a minimal ASCII OBJ subset and a JSON schema.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::TriMesh;
use crate::error::{Error, Result};
use crate::exterior::Point3;
use crate::schema::parse_json;

/// Reads `v x y z` and `f i j k` records (1-based, triangles only).
///
/// Blank lines and `#` comments are skipped; any other record is an error
/// that names the 1-based line.
pub fn parse_obj(text: &str) -> Result<TriMesh> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::Parse { line, message };
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut fields = body.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let rest: Vec<&str> = fields.collect();
        match tag {
            "v" => {
                if rest.len() != 3 {
                    return Err(err(format!("vertex needs 3 coordinates, got {}", rest.len())));
                }
                let mut c = [0.0; 3];
                for (k, s) in rest.iter().enumerate() {
                    c[k] = s
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| err(format!("bad coordinate {s:?}")))?;
                }
                vertices.push(Point3::from(c));
            }
            "f" => {
                if rest.len() != 3 {
                    return Err(err(format!("only triangles are supported, got {} indices", rest.len())));
                }
                let mut t = [0usize; 3];
                for (k, s) in rest.iter().enumerate() {
                    let i: usize = s
                        .parse()
                        .ok()
                        .filter(|&i| i >= 1)
                        .ok_or_else(|| err(format!("bad face index {s:?}")))?;
                    t[k] = i - 1;
                }
                faces.push((line, t));
            }
            other => return Err(err(format!("unsupported record {other:?}"))),
        }
    }
    for &(line, t) in &faces {
        if let Some(&bad) = t.iter().find(|&&i| i >= vertices.len()) {
            return Err(Error::Parse {
                line,
                message: format!("face index {} out of range ({} vertices)", bad + 1, vertices.len()),
            });
        }
    }
    TriMesh::new(vertices, faces.into_iter().map(|(_, t)| t).collect())
}

pub fn mesh_to_obj(mesh: &TriMesh) -> String {
    let mut out = String::new();
    for p in mesh.vertices() {
        let _ = writeln!(out, "v {:?} {:?} {:?}", p.x, p.y, p.z);
    }
    for t in mesh.triangles() {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}

/// `{"vertices":[[x,y,z],...],"triangles":[[i,j,k],...]}`, 0-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshJson {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

pub fn mesh_from_json(text: &str) -> Result<TriMesh> {
    let m: MeshJson = parse_json(text)?;
    TriMesh::new(m.vertices.into_iter().map(Point3::from).collect(), m.triangles)
}

pub fn mesh_to_json(mesh: &TriMesh) -> String {
    let m = MeshJson {
        vertices: mesh.vertices().iter().map(|p| p.to_array()).collect(),
        triangles: mesh.triangles().to_vec(),
    };
    serde_json::to_string(&m).expect("mesh serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::shapes::unit_cube;

    #[test]
    fn obj_round_trip_cube() {
        let cube = unit_cube();
        let back = parse_obj(&mesh_to_obj(&cube)).unwrap();
        assert_eq!(back, cube);
    }

    #[test]
    fn obj_comments_and_blank_lines() {
        let text = "# tri\n\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
        let m = parse_obj(text).unwrap();
        assert_eq!(m.triangles(), &[[0, 1, 2]]);
    }

    #[test]
    fn obj_errors_name_the_line() {
        let cases = [
            ("v 0 0 0\nvn 0 0 1\n", 2),
            ("v 0 0\n", 1),
            ("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 3 4\n", 5),
            ("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1 2/2 3/3\n", 4),
            ("v 0 0 0\nv 1 0 0\nv 0 1 0\n\nf 1 2 9\n", 5),
            ("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n", 4),
            ("v 0 zero 0\n", 1),
        ];
        for (text, want) in cases {
            match parse_obj(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn json_round_trip_cube() {
        let cube = unit_cube();
        assert_eq!(mesh_from_json(&mesh_to_json(&cube)).unwrap(), cube);
    }

    #[test]
    fn json_errors_have_path() {
        let err = mesh_from_json(r#"{"vertices":[[0,0,0],[1,0,"x"]],"triangles":[]}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("vertices[1][2]"), "{msg}");
        assert!(msg.contains("line 1"), "{msg}");
    }
}
