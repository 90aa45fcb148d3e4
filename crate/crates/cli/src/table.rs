use serde::ser::{Serialize, Serializer};
use serde_json::{Map, Value as Json};

/// Storage type of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Int,
    Float,
    Text,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub kind: Kind,
}

impl Column {
    pub fn new(name: &str, unit: &str, kind: Kind) -> Self {
        Self { name: name.into(), unit: unit.into(), kind }
    }

    pub fn float(name: &str, unit: &str) -> Self {
        Self::new(name, unit, Kind::Float)
    }

    pub fn int(name: &str) -> Self {
        Self::new(name, "1", Kind::Int)
    }

    pub fn text(name: &str) -> Self {
        Self::new(name, "", Kind::Text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Int(_) => Kind::Int,
            Value::Float(_) => Kind::Float,
            Value::Text(_) => Kind::Text,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Int(i) => Some(i as f64),
            Value::Float(x) => Some(x),
            Value::Text(_) => None,
        }
    }

    /// Bitwise equality, so that NaN matches NaN.
    pub fn same(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Float(a), Value::Float(b)) => a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()),
            _ => self == other,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.into())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(i) => s.serialize_i64(*i),
            Value::Float(x) if x.is_finite() => s.serialize_f64(*x),
            Value::Float(_) => s.serialize_none(),
            Value::Text(t) => s.serialize_str(t),
        }
    }
}

/// Columns to draw when the table is rendered as SVG.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub y: Vec<String>,
    pub log_x: bool,
    pub log_y: bool,
}

/// Rows of one experiment, with metadata and an optional plot layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
    pub meta: Map<String, Json>,
    pub plot: Option<PlotSpec>,
}

impl ResultTable {
    pub fn new(name: &str, title: &str, columns: Vec<Column>) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            columns,
            rows: Vec::new(),
            meta: Map::new(),
            plot: None,
        }
    }

    /// Appends a row; panics if its shape disagrees with the columns.
    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        for (v, c) in row.iter().zip(&self.columns) {
            assert_eq!(v.kind(), c.kind, "column {} of table {}", c.name, self.name);
        }
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Numeric column by name; text cells read as NaN.
    pub fn column_values(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<Json>) {
        self.meta.insert(key.into(), value.into());
    }
}

/// Finite floats as JSON numbers, everything else as null.
pub fn json_number(x: f64) -> Json {
    serde_json::Number::from_f64(x).map(Json::Number).unwrap_or(Json::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_serializes_as_null() {
        let row = vec![Value::Float(f64::NAN), Value::Int(3), Value::from("x"), Value::Float(0.1)];
        assert_eq!(serde_json::to_string(&row).unwrap(), r#"[null,3,"x",0.1]"#);
        assert!(Value::Float(f64::NAN).same(&Value::Float(f64::NAN)));
        assert!(!Value::Float(0.0).same(&Value::Float(-0.0)));
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn push_checks_width() {
        let mut t = ResultTable::new("t", "t", vec![Column::int("i")]);
        t.push(vec![]);
    }
}
