//! Output formatting shared by the subcommands.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use socle::Rational;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Integers that fit in i64 become JSON numbers; anything else is a string
/// such as "-3/4" or a big integer in decimal.
pub fn scalar_json(v: &Rational) -> Value {
    if v.is_integer() {
        if let Ok(n) = v.to_integer().to_string().parse::<i64>() {
            return Value::from(n);
        }
    }
    Value::String(v.to_string())
}

pub fn scalar(fmt: Format, name: &str, v: &Rational) {
    match fmt {
        Format::Json => println!("{}", scalar_json(v)),
        Format::Csv => println!("{name}\n{v}"),
        Format::Pretty => println!("{v}"),
    }
}

pub fn json_line<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rows of JSON values under fixed column names.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    /// A one-row table from the fields of a JSON object, in order.
    pub fn from_object(obj: &Value) -> Self {
        let map = obj.as_object().expect("object");
        Table { headers: map.keys().cloned().collect(), rows: vec![map.values().cloned().collect()] }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Pushes the fields of a serializable struct named by the headers.
    pub fn push_serialized<T: Serialize>(&mut self, item: &T) {
        let value = serde_json::to_value(item).expect("serializable");
        let row = self.headers.iter().map(|h| value.get(h).cloned().unwrap_or(Value::Null)).collect();
        self.rows.push(row);
    }

    fn object(&self, row: &[Value]) -> Value {
        Value::Object(self.headers.iter().cloned().zip(row.iter().cloned()).collect())
    }

    fn csv(&self) {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(&self.headers).expect("stdout");
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).expect("stdout");
        }
        w.flush().expect("stdout");
    }

    fn pretty(&self) {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.headers[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            println!("{}", padded.join("  ").trim_end());
        };
        line(self.headers.iter().map(String::as_str).collect());
        for row in &cells {
            line(row.iter().map(String::as_str).collect());
        }
    }

    /// JSON: an array of objects.
    pub fn print(&self, fmt: Format) {
        match fmt {
            Format::Json => {
                let all: Vec<Value> = self.rows.iter().map(|r| self.object(r)).collect();
                json_line(&all);
            }
            Format::Csv => self.csv(),
            Format::Pretty => self.pretty(),
        }
    }

    /// JSON: one object per line.
    pub fn print_lines(&self, fmt: Format) {
        match fmt {
            Format::Json => self.rows.iter().for_each(|r| json_line(&self.object(r))),
            _ => self.print(fmt),
        }
    }

    /// JSON: the single row as one object; pretty: `key: value` lines.
    pub fn print_single(&self, fmt: Format) {
        match fmt {
            Format::Json => self.rows.iter().for_each(|r| json_line(&self.object(r))),
            Format::Csv => self.csv(),
            Format::Pretty => {
                for row in &self.rows {
                    for (h, v) in self.headers.iter().zip(row) {
                        println!("{h}: {}", cell(v));
                    }
                }
            }
        }
    }
}
