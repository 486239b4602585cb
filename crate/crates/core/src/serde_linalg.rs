//! Serde adapters: vectors as plain arrays, matrices as row-major records.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{Matrix, Vector};

pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector, D::Error> {
        Ok(Vector::from_vec(Vec::<f64>::deserialize(d)?))
    }
}

pub mod opt_vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vector>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|v| v.as_slice().to_vec()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vector>, D::Error> {
        Ok(Option::<Vec<f64>>::deserialize(d)?.map(Vector::from_vec))
    }
}

#[derive(Serialize, Deserialize)]
struct RowMajor {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        let data = (0..m.nrows()).flat_map(|i| m.row(i).iter().copied().collect::<Vec<_>>()).collect();
        RowMajor { rows: m.nrows(), cols: m.ncols(), data }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let rm = RowMajor::deserialize(d)?;
        if rm.data.len() != rm.rows * rm.cols {
            return Err(serde::de::Error::custom(format!(
                "matrix data has {} entries, expected {}x{}",
                rm.data.len(),
                rm.rows,
                rm.cols
            )));
        }
        Ok(Matrix::from_row_slice(rm.rows, rm.cols, &rm.data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "matrix")]
        m: Matrix,
        #[serde(with = "vector")]
        v: Vector,
    }

    #[test]
    fn row_major_layout() {
        let h =
            Holder { m: Matrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), v: Vector::from_vec(vec![0.5]) };
        let json = serde_json::to_string(&h).unwrap();
        assert!(json.contains("\"data\":[1.0,2.0,3.0,4.0,5.0,6.0]"));
        let back: Holder = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn rejects_ragged_data() {
        let bad = r#"{"m":{"rows":2,"cols":2,"data":[1.0]},"v":[]}"#;
        assert!(serde_json::from_str::<Holder>(bad).is_err());
    }
}
