//! Reading and writing ARFF (attribute-relation file format) documents.
//!
//! Supported attribute types are `numeric` (also `real` / `integer`), `string`
//! and nominal value lists. Data rows may be dense (`a,b,c`) or sparse
//! (`{0 a, 2 c}`); in a sparse row every attribute that is not mentioned takes
//! its default: `0` for numeric, the first declared value for nominal and the
//! empty string for string attributes.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// The type of a single attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeKind {
    /// Ordered list of admissible values.
    Nominal(Vec<String>),
    String,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
}

impl AttributeSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: AttributeKind::Numeric }
    }

    pub fn string(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: AttributeKind::String }
    }

    pub fn nominal<I, S>(name: impl Into<String>, values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            name: name.into(),
            kind: AttributeKind::Nominal(values.into_iter().map(Into::into).collect()),
        }
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self.kind, AttributeKind::Nominal(_))
    }

    /// Declared values of a nominal attribute, `None` otherwise.
    pub fn nominal_values(&self) -> Option<&[String]> {
        match &self.kind {
            AttributeKind::Nominal(values) => Some(values),
            _ => None,
        }
    }

    /// Position of `value` in a nominal attribute's value list.
    pub fn index_of(&self, value: &str) -> Option<usize> {
        self.nominal_values()?.iter().position(|v| v == value)
    }

    /// Value an attribute takes when a sparse row does not mention it.
    fn sparse_default(&self) -> Value {
        match &self.kind {
            AttributeKind::Numeric => Value::Number(0.0),
            AttributeKind::Nominal(values) => {
                Value::Text(values.first().cloned().unwrap_or_default())
            }
            AttributeKind::String => Value::Text(String::new()),
        }
    }
}

/// One cell of an instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Number(f64),
    Missing,
}

impl Value {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Instance {
    pub values: Vec<Value>,
}

impl Instance {
    pub fn new(values: Vec<Value>) -> Self {
        Self { values }
    }
}

/// A relation: attribute declarations plus rows.
///
/// Fields are public so that arbitrary (possibly invalid) datasets can be
/// assembled; [`validate`] reports whether the invariants hold. Everything
/// returned by [`parse_arff`] is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub relation: String,
    pub attributes: Vec<AttributeSpec>,
    pub instances: Vec<Instance>,
    pub class_index: usize,
}

impl Dataset {
    /// Empty dataset whose class is the last attribute.
    pub fn new(relation: impl Into<String>, attributes: Vec<AttributeSpec>) -> Self {
        let class_index = attributes.len().saturating_sub(1);
        Self { relation: relation.into(), attributes, instances: Vec::new(), class_index }
    }

    pub fn with_class_index(mut self, class_index: usize) -> Self {
        self.class_index = class_index;
        self
    }

    pub fn class_attribute(&self) -> Option<&AttributeSpec> {
        self.attributes.get(self.class_index)
    }

    /// Declared class labels, empty if the class attribute is not nominal.
    pub fn class_labels(&self) -> &[String] {
        self.class_attribute().and_then(AttributeSpec::nominal_values).unwrap_or(&[])
    }

    /// Index into [`Self::class_labels`] of an instance's class, if present.
    pub fn class_of(&self, instance: &Instance) -> Option<usize> {
        let attr = self.class_attribute()?;
        instance.values.get(self.class_index)?.as_text().and_then(|v| attr.index_of(v))
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// A broken dataset invariant found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Offending instance, `None` for header-level problems.
    pub instance: Option<usize>,
    pub attribute: Option<String>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    EmptyAttributeName,
    DuplicateAttributeName,
    EmptyNominalList,
    DuplicateNominalValue(String),
    ClassIndexOutOfRange,
    ClassNotNominal,
    Arity { expected: usize, found: usize },
    UndeclaredNominalValue(String),
    TypeMismatch,
    NonFiniteNumber,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.instance {
            write!(f, "instance {i}: ")?;
        }
        if let Some(a) = &self.attribute {
            write!(f, "attribute '{a}': ")?;
        }
        match &self.kind {
            ViolationKind::EmptyAttributeName => write!(f, "empty attribute name"),
            ViolationKind::DuplicateAttributeName => write!(f, "duplicate attribute name"),
            ViolationKind::EmptyNominalList => write!(f, "nominal value list is empty"),
            ViolationKind::DuplicateNominalValue(v) => write!(f, "duplicate nominal value '{v}'"),
            ViolationKind::ClassIndexOutOfRange => write!(f, "class index out of range"),
            ViolationKind::ClassNotNominal => write!(f, "class must be nominal"),
            ViolationKind::Arity { expected, found } => {
                write!(f, "arity mismatch: expected {expected} cells, found {found}")
            }
            ViolationKind::UndeclaredNominalValue(v) => write!(f, "undeclared nominal value '{v}'"),
            ViolationKind::TypeMismatch => write!(f, "cell type does not match attribute type"),
            ViolationKind::NonFiniteNumber => write!(f, "numeric cell is not finite"),
        }
    }
}

/// Checks every dataset invariant; an empty result means the dataset is valid.
pub fn validate(data: &Dataset) -> Vec<Violation> {
    let mut out = Vec::new();
    let header = |attribute: Option<&str>, kind| Violation {
        instance: None,
        attribute: attribute.map(str::to_owned),
        kind,
    };

    let mut seen = HashSet::new();
    for attr in &data.attributes {
        if attr.name.is_empty() {
            out.push(header(None, ViolationKind::EmptyAttributeName));
        }
        if !seen.insert(attr.name.as_str()) {
            out.push(header(Some(&attr.name), ViolationKind::DuplicateAttributeName));
        }
        if let AttributeKind::Nominal(values) = &attr.kind {
            if values.is_empty() {
                out.push(header(Some(&attr.name), ViolationKind::EmptyNominalList));
            }
            let mut seen_values = HashSet::new();
            for v in values {
                if !seen_values.insert(v.as_str()) {
                    out.push(header(
                        Some(&attr.name),
                        ViolationKind::DuplicateNominalValue(v.clone()),
                    ));
                }
            }
        }
    }
    match data.class_attribute() {
        None => out.push(header(None, ViolationKind::ClassIndexOutOfRange)),
        Some(attr) if !attr.is_nominal() => {
            out.push(header(Some(&attr.name), ViolationKind::ClassNotNominal))
        }
        Some(_) => {}
    }

    for (i, inst) in data.instances.iter().enumerate() {
        if inst.values.len() != data.attributes.len() {
            out.push(Violation {
                instance: Some(i),
                attribute: None,
                kind: ViolationKind::Arity {
                    expected: data.attributes.len(),
                    found: inst.values.len(),
                },
            });
            continue;
        }
        for (attr, value) in data.attributes.iter().zip(&inst.values) {
            let kind = match (&attr.kind, value) {
                (_, Value::Missing) => None,
                (AttributeKind::Numeric, Value::Number(x)) if !x.is_finite() => {
                    Some(ViolationKind::NonFiniteNumber)
                }
                (AttributeKind::Numeric, Value::Number(_)) => None,
                (AttributeKind::String, Value::Text(_)) => None,
                (AttributeKind::Nominal(values), Value::Text(t)) => {
                    (!values.contains(t)).then(|| ViolationKind::UndeclaredNominalValue(t.clone()))
                }
                _ => Some(ViolationKind::TypeMismatch),
            };
            if let Some(kind) = kind {
                out.push(Violation {
                    instance: Some(i),
                    attribute: Some(attr.name.clone()),
                    kind,
                });
            }
        }
    }
    out
}

/// A parse failure and the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ArffError {
    pub line: usize,
    pub kind: ArffErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArffErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("undeclared nominal value '{value}' for attribute '{attribute}'")]
    UndeclaredNominalValue { attribute: String, value: String },
    #[error("arity mismatch: expected {expected} values, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("data row before header complete")]
    DataBeforeHeader,
    #[error("invalid number '{0}'")]
    InvalidNumber(String),
    #[error("unterminated quoted value")]
    UnterminatedQuote,
    #[error("malformed sparse row: {0}")]
    MalformedSparse(String),
    #[error("{0}")]
    Invalid(String),
}

fn err(line: usize, kind: ArffErrorKind) -> ArffError {
    ArffError { line, kind }
}

/// Parses a complete ARFF document with the class attribute in last position.
pub fn parse_arff(text: &str) -> Result<Dataset, ArffError> {
    parse_arff_with_class(text, None)
}

/// Parses a complete ARFF document, taking the class from `class_index`
/// (`None` = last attribute).
pub fn parse_arff_with_class(text: &str, class_index: Option<usize>) -> Result<Dataset, ArffError> {
    let mut relation: Option<String> = None;
    let mut attributes: Vec<AttributeSpec> = Vec::new();
    let mut names = HashSet::new();
    let mut in_data = false;
    let mut data_line = 0;
    let mut instances = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if in_data {
            let inst = parse_row(line, &attributes).map_err(|k| err(line_no, k))?;
            instances.push(inst);
            continue;
        }
        if !line.starts_with('@') {
            return Err(err(line_no, ArffErrorKind::DataBeforeHeader));
        }
        let (keyword, rest) = split_keyword(line);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => {
                if relation.is_some() {
                    return Err(err(line_no, malformed("duplicate @relation")));
                }
                let (name, tail) = read_name(rest).map_err(|k| err(line_no, k))?;
                if !tail.trim().is_empty() {
                    return Err(err(line_no, malformed("trailing text after relation name")));
                }
                relation = Some(name);
            }
            "@attribute" => {
                if relation.is_none() {
                    return Err(err(line_no, malformed("@attribute before @relation")));
                }
                let attr = parse_attribute(rest).map_err(|k| err(line_no, k))?;
                if !names.insert(attr.name.clone()) {
                    return Err(err(
                        line_no,
                        malformed(format!("duplicate attribute name '{}'", attr.name)),
                    ));
                }
                attributes.push(attr);
            }
            "@data" => {
                if relation.is_none() {
                    return Err(err(line_no, malformed("@data before @relation")));
                }
                if attributes.is_empty() {
                    return Err(err(line_no, malformed("no attributes declared")));
                }
                if !rest.trim().is_empty() {
                    return Err(err(line_no, malformed("trailing text after @data")));
                }
                in_data = true;
                data_line = line_no;
            }
            other => {
                return Err(err(line_no, malformed(format!("unknown keyword '{other}'"))));
            }
        }
    }

    let last_line = text.lines().count().max(1);
    if !in_data {
        return Err(err(last_line, malformed("missing @data section")));
    }
    let class_index = class_index.unwrap_or(attributes.len() - 1);
    match attributes.get(class_index) {
        None => {
            return Err(err(data_line, ArffErrorKind::Invalid("class index out of range".into())))
        }
        Some(a) if !a.is_nominal() => {
            return Err(err(
                data_line,
                ArffErrorKind::Invalid(format!("class attribute '{}' must be nominal", a.name)),
            ))
        }
        Some(_) => {}
    }
    Ok(Dataset {
        relation: relation.unwrap_or_default(),
        attributes,
        instances,
        class_index,
    })
}

fn malformed(msg: impl Into<String>) -> ArffErrorKind {
    ArffErrorKind::MalformedHeader(msg.into())
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(pos) => (&line[..pos], &line[pos..]),
        None => (line, ""),
    }
}

/// Reads one possibly-quoted token from the front of `s`.
fn read_name(s: &str) -> Result<(String, &str), ArffErrorKind> {
    let s = s.trim_start();
    match s.chars().next() {
        None => Err(malformed("missing name")),
        Some(q @ ('\'' | '"')) => {
            let (value, consumed) = read_quoted(s, q)?;
            Ok((value, &s[consumed..]))
        }
        Some(_) => {
            let end = s.find(char::is_whitespace).unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
    }
}

/// Reads a quoted token starting at `s[0] == quote`; returns the unescaped
/// content and the number of bytes consumed including both quotes.
fn read_quoted(s: &str, quote: char) -> Result<(String, usize), ArffErrorKind> {
    let mut out = String::new();
    let mut chars = s.char_indices().skip(1);
    while let Some((i, c)) = chars.next() {
        if c == '\\' {
            let (_, e) = chars.next().ok_or(ArffErrorKind::UnterminatedQuote)?;
            out.push(match e {
                'n' => '\n',
                't' => '\t',
                'r' => '\r',
                other => other,
            });
        } else if c == quote {
            return Ok((out, i + c.len_utf8()));
        } else {
            out.push(c);
        }
    }
    Err(ArffErrorKind::UnterminatedQuote)
}

fn parse_attribute(rest: &str) -> Result<AttributeSpec, ArffErrorKind> {
    let (name, tail) = read_name(rest)?;
    if name.is_empty() {
        return Err(malformed("empty attribute name"));
    }
    let ty = tail.trim();
    if let Some(body) = ty.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .ok_or_else(|| malformed("unterminated nominal value list"))?;
        let values = split_fields(body)?
            .into_iter()
            .map(|f| f.text)
            .collect::<Vec<_>>();
        if values.is_empty() || (values.len() == 1 && values[0].is_empty() && body.trim().is_empty())
        {
            return Err(malformed(format!("empty nominal value list for '{name}'")));
        }
        let mut seen = HashSet::new();
        for v in &values {
            if !seen.insert(v.as_str()) {
                return Err(malformed(format!("duplicate nominal value '{v}' in '{name}'")));
            }
        }
        return Ok(AttributeSpec { name, kind: AttributeKind::Nominal(values) });
    }
    let kind = match ty.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => AttributeKind::Numeric,
        "string" => AttributeKind::String,
        "" => return Err(malformed(format!("missing type for attribute '{name}'"))),
        other => return Err(malformed(format!("unsupported attribute type '{other}'"))),
    };
    Ok(AttributeSpec { name, kind })
}

/// A field of a comma-separated list after unquoting.
#[derive(Debug)]
struct Field {
    text: String,
    quoted: bool,
}

/// Splits `s` on commas that are not inside quotes, unquoting each field.
fn split_fields(s: &str) -> Result<Vec<Field>, ArffErrorKind> {
    let mut fields = Vec::new();
    let mut rest = s;
    loop {
        let trimmed = rest.trim_start();
        let (field, after) = match trimmed.chars().next() {
            Some(q @ ('\'' | '"')) => {
                let (text, consumed) = read_quoted(trimmed, q)?;
                (Field { text, quoted: true }, &trimmed[consumed..])
            }
            _ => {
                let end = trimmed.find(',').unwrap_or(trimmed.len());
                let text = trimmed[..end].trim_end().to_string();
                (Field { text, quoted: false }, &trimmed[end..])
            }
        };
        fields.push(field);
        let after = after.trim_start();
        match after.strip_prefix(',') {
            Some(next) => rest = next,
            None if after.is_empty() => return Ok(fields),
            None => return Err(ArffErrorKind::Invalid(format!("unexpected text '{after}'"))),
        }
    }
}

/// Splits one sparse entry `index value` into its parts.
fn split_sparse_entry(s: &str) -> Result<(usize, &str), ArffErrorKind> {
    let s = s.trim();
    let pos = s
        .find(char::is_whitespace)
        .ok_or_else(|| ArffErrorKind::MalformedSparse(format!("entry '{s}' has no value")))?;
    let index = s[..pos]
        .parse::<usize>()
        .map_err(|_| ArffErrorKind::MalformedSparse(format!("bad index '{}'", &s[..pos])))?;
    Ok((index, s[pos..].trim_start()))
}

fn parse_row(line: &str, attributes: &[AttributeSpec]) -> Result<Instance, ArffErrorKind> {
    if let Some(body) = line.strip_prefix('{') {
        let body = body
            .trim_end()
            .strip_suffix('}')
            .ok_or_else(|| ArffErrorKind::MalformedSparse("missing closing brace".into()))?;
        let mut values: Vec<Value> = attributes.iter().map(AttributeSpec::sparse_default).collect();
        if body.trim().is_empty() {
            return Ok(Instance { values });
        }
        let mut last: Option<usize> = None;
        for entry in split_raw(body)? {
            let (index, raw) = split_sparse_entry(entry)?;
            let attr = attributes.get(index).ok_or_else(|| {
                ArffErrorKind::MalformedSparse(format!("index {index} out of range"))
            })?;
            if last.is_some_and(|l| index <= l) {
                return Err(ArffErrorKind::MalformedSparse(
                    "indices must be strictly increasing".into(),
                ));
            }
            last = Some(index);
            let mut fields = split_fields(raw)?;
            if fields.len() != 1 {
                return Err(ArffErrorKind::MalformedSparse(format!("bad value '{raw}'")));
            }
            values[index] = convert_cell(fields.remove(0), attr)?;
        }
        return Ok(Instance { values });
    }

    let fields = split_fields(line)?;
    if fields.len() != attributes.len() {
        return Err(ArffErrorKind::ArityMismatch {
            expected: attributes.len(),
            found: fields.len(),
        });
    }
    let values = fields
        .into_iter()
        .zip(attributes)
        .map(|(f, a)| convert_cell(f, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance { values })
}

/// Splits a sparse body on top-level commas, keeping quotes intact.
fn split_raw(s: &str) -> Result<Vec<&str>, ArffErrorKind> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if let Some(q) = quote {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            }
            continue;
        }
        match c {
            '\'' | '"' => quote = Some(c),
            ',' => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if quote.is_some() {
        return Err(ArffErrorKind::UnterminatedQuote);
    }
    out.push(&s[start..]);
    Ok(out)
}

fn convert_cell(field: Field, attr: &AttributeSpec) -> Result<Value, ArffErrorKind> {
    if !field.quoted && field.text == "?" {
        return Ok(Value::Missing);
    }
    match &attr.kind {
        AttributeKind::Numeric => {
            let x = field
                .text
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && !field.quoted)
                .ok_or_else(|| ArffErrorKind::InvalidNumber(field.text.clone()))?;
            Ok(Value::Number(x))
        }
        AttributeKind::String => Ok(Value::Text(field.text)),
        AttributeKind::Nominal(values) => {
            if values.contains(&field.text) {
                Ok(Value::Text(field.text))
            } else {
                Err(ArffErrorKind::UndeclaredNominalValue {
                    attribute: attr.name.clone(),
                    value: field.text,
                })
            }
        }
    }
}

/// Quotes `s` when it would not survive the parser unquoted.
pub fn quote(s: &str) -> String {
    let needs = s.is_empty()
        || s == "?"
        || s.starts_with('%')
        || s.starts_with('@')
        || s.chars().any(|c| {
            c.is_whitespace() || matches!(c, ',' | '\'' | '"' | '\\' | '{' | '}' | '%')
        });
    if !needs {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x}")
}

fn format_value(value: &Value) -> String {
    match value {
        Value::Missing => "?".to_string(),
        Value::Number(x) => format_number(*x),
        Value::Text(t) => quote(t),
    }
}

fn write_header(data: &Dataset, out: &mut String) {
    out.push_str("@relation ");
    out.push_str(&quote(&data.relation));
    out.push_str("\n\n");
    for attr in &data.attributes {
        out.push_str("@attribute ");
        out.push_str(&quote(&attr.name));
        out.push(' ');
        match &attr.kind {
            AttributeKind::Numeric => out.push_str("numeric"),
            AttributeKind::String => out.push_str("string"),
            AttributeKind::Nominal(values) => {
                out.push('{');
                let joined: Vec<String> = values.iter().map(|v| quote(v)).collect();
                out.push_str(&joined.join(","));
                out.push('}');
            }
        }
        out.push('\n');
    }
    out.push_str("\n@data\n");
}

/// Renders a dataset as ARFF text, using `{index value}` rows when `sparse`.
pub fn write_arff(data: &Dataset, sparse: bool) -> String {
    let mut out = String::new();
    write_header(data, &mut out);
    for inst in &data.instances {
        if sparse {
            let mut entries = Vec::new();
            for (i, (attr, value)) in data.attributes.iter().zip(&inst.values).enumerate() {
                let is_default = match (&attr.kind, value) {
                    (AttributeKind::Numeric, Value::Number(x)) => *x == 0.0,
                    (AttributeKind::Nominal(values), Value::Text(t)) => values.first() == Some(t),
                    _ => false,
                };
                if !is_default {
                    entries.push(format!("{i} {}", format_value(value)));
                }
            }
            out.push('{');
            out.push_str(&entries.join(","));
            out.push('}');
        } else {
            let cells: Vec<String> = inst.values.iter().map(format_value).collect();
            out.push_str(&cells.join(","));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "@relation r\n@attribute text string\n@attribute label {A,B}\n@data\n'x',A\n";

    #[test]
    fn parses_minimal_document() {
        let d = parse_arff(SMALL).unwrap();
        assert_eq!(d.relation, "r");
        assert_eq!(d.len(), 1);
        assert_eq!(d.class_index, 1);
        assert_eq!(d.instances[0].values[0], Value::Text("x".into()));
        assert_eq!(d.class_labels(), ["A", "B"]);
        assert!(validate(&d).is_empty());
    }

    #[test]
    fn undeclared_nominal_value_reports_line() {
        let text = "@relation r\n@attribute text string\n@attribute label {A,B}\n@data\n'x',A\n'y',C\n";
        let e = parse_arff(text).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.to_string().contains("undeclared nominal value"));
    }

    #[test]
    fn keywords_are_case_insensitive_names_are_not() {
        let text = "@RELATION r\n@Attribute a NUMERIC\n@attribute A numeric\n@ATTRIBUTE c {x}\n@DATA\n1,2,x\n";
        let d = parse_arff(text).unwrap();
        assert_eq!(d.attributes.len(), 3);
        let dup = "@relation r\n@attribute a numeric\n@attribute a numeric\n@attribute c {x}\n@data\n";
        assert_eq!(parse_arff(dup).unwrap_err().line, 3);
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let text = "% leading\n@relation r\n\n% mid\n@attribute c {x,y}\n@data\n% in data\ny\n";
        assert_eq!(parse_arff(text).unwrap().len(), 1);
    }

    #[test]
    fn arity_mismatch_located() {
        let text = "@relation r\n@attribute a numeric\n@attribute c {x}\n@data\n1,x\n1,2,x\n";
        let e = parse_arff(text).unwrap_err();
        assert_eq!(e.line, 6);
        assert_eq!(e.kind, ArffErrorKind::ArityMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn data_before_header_is_error() {
        let text = "@relation r\n1,x\n@attribute c {x}\n@data\n";
        let e = parse_arff(text).unwrap_err();
        assert_eq!((e.line, e.kind), (2, ArffErrorKind::DataBeforeHeader));
    }

    #[test]
    fn malformed_headers() {
        for text in [
            "@relation r\n@attribute a date\n@attribute c {x}\n@data\n",
            "@relation r\n@attribute c {}\n@data\n",
            "@relation r\n@attribute c {x,x}\n@data\n",
            "@relation r\n@attribute c\n@data\n",
            "@relation r\n@attribute c {x}\n",
            "@attribute c {x}\n@data\n",
        ] {
            let e = parse_arff(text).unwrap_err();
            assert!(matches!(e.kind, ArffErrorKind::MalformedHeader(_)), "{text:?} -> {e}");
        }
    }

    #[test]
    fn class_must_be_nominal() {
        let text = "@relation r\n@attribute c {x}\n@attribute n numeric\n@data\nx,1\n";
        assert!(parse_arff(text).is_err());
        let d = parse_arff_with_class(text, Some(0)).unwrap();
        assert_eq!(d.class_index, 0);
    }

    #[test]
    fn quoting_and_escapes() {
        let text = "@relation 'my rel'\n@attribute 'a b' string\n@attribute c {'x y',\"z\"}\n@data\n\"l'été\",'x y'\n'a\\'b\\\\c',z\n";
        let d = parse_arff(text).unwrap();
        assert_eq!(d.relation, "my rel");
        assert_eq!(d.attributes[0].name, "a b");
        assert_eq!(d.instances[0].values[0], Value::Text("l'été".into()));
        assert_eq!(d.instances[1].values[0], Value::Text("a'b\\c".into()));
        assert_eq!(parse_arff(&write_arff(&d, false)).unwrap(), d);
    }

    #[test]
    fn apostrophe_cell_is_quoted_on_write() {
        let mut d = Dataset::new("r", vec![AttributeSpec::string("t"), AttributeSpec::nominal("c", ["A"])]);
        d.instances.push(Instance::new(vec![Value::Text("l'été".into()), Value::Text("A".into())]));
        let text = write_arff(&d, false);
        assert!(text.contains("'l\\'été'"));
        assert_eq!(parse_arff(&text).unwrap(), d);
    }

    #[test]
    fn missing_values_distinct_from_zero() {
        let text = "@relation r\n@attribute a numeric\n@attribute s string\n@attribute c {x}\n@data\n?,'?',x\n0,?,?\n";
        let d = parse_arff(text).unwrap();
        assert_eq!(d.instances[0].values[0], Value::Missing);
        assert_eq!(d.instances[0].values[1], Value::Text("?".into()));
        assert_eq!(d.instances[1].values[0], Value::Number(0.0));
        assert!(d.instances[1].values[2].is_missing());
        assert_eq!(parse_arff(&write_arff(&d, false)).unwrap(), d);
        assert_eq!(parse_arff(&write_arff(&d, true)).unwrap(), d);
    }

    #[test]
    fn sparse_rows_expand_with_defaults() {
        let text = "@relation r\n@attribute a numeric\n@attribute b numeric\n@attribute n {p,q}\n@attribute c {x,y}\n@data\n{1 2.5, 3 y}\n{}\n";
        let d = parse_arff(text).unwrap();
        assert_eq!(
            d.instances[0].values,
            vec![Value::Number(0.0), Value::Number(2.5), Value::Text("p".into()), Value::Text("y".into())]
        );
        assert_eq!(d.instances[1].values[3], Value::Text("x".into()));
    }

    #[test]
    fn sparse_errors() {
        let head = "@relation r\n@attribute a numeric\n@attribute c {x,y}\n@data\n";
        for row in ["{5 1}", "{1 y, 0 2}", "{0}", "{0 1", "{1 z}"] {
            let e = parse_arff(&format!("{head}{row}\n")).unwrap_err();
            assert_eq!(e.line, 5, "{row}");
        }
    }

    #[test]
    fn sparse_write_lists_only_nonzeros() {
        let mut attrs: Vec<AttributeSpec> =
            (0..10_000).map(|i| AttributeSpec::numeric(format!("f{i}"))).collect();
        attrs.push(AttributeSpec::nominal("class", ["A", "B"]));
        let mut d = Dataset::new("v", attrs);
        let mut values = vec![Value::Number(0.0); 10_000];
        values[3] = Value::Number(1.0);
        values[9_999] = Value::Number(2.0);
        values.push(Value::Text("A".into()));
        d.instances.push(Instance::new(values));
        let text = write_arff(&d, true);
        let row = text.lines().last().unwrap();
        assert_eq!(row, "{3 1,9999 2}");
        assert_eq!(parse_arff(&text).unwrap(), d);
    }

    #[test]
    fn writer_emits_sections_in_order() {
        let d = parse_arff(SMALL).unwrap();
        let text = write_arff(&d, false);
        let r = text.find("@relation").unwrap();
        let a = text.find("@attribute").unwrap();
        let data = text.find("@data").unwrap();
        assert!(r < a && a < data);
    }

    #[test]
    fn validate_reports_violations() {
        let mut d = parse_arff(SMALL).unwrap();
        assert!(validate(&d).is_empty());
        d.instances.push(Instance::new(vec![
            Value::Text("a".into()),
            Value::Text("A".into()),
            Value::Text("extra".into()),
        ]));
        let v = validate(&d);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].instance, Some(1));
        assert!(matches!(v[0].kind, ViolationKind::Arity { expected: 2, found: 3 }));

        let mut d = parse_arff(SMALL).unwrap();
        d.attributes[1].kind = AttributeKind::Numeric;
        d.instances.clear();
        let v = validate(&d);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::ClassNotNominal);
        assert_eq!(v[0].to_string(), "attribute 'label': class must be nominal");
    }

    #[test]
    fn number_formatting_round_trips() {
        for x in [0.0, 1.0, -2.5, 0.1, 1e-300, 123456789.123, f64::MAX, f64::MIN_POSITIVE] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(3.0), "3");
    }
}
