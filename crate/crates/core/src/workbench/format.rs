//! The TOML instance document.
//!
//! ```toml
//! capacity = "1"
//!
//! [[agents]]
//! id = "1"
//! model = "understating"
//! items = [
//!   { id = "a", value = "3/4", size = "1/2" },
//! ]
//! ```
//!
//! A size-report instance sets `kqus = true` and gives each agent `id`, `ratio` and `size`
//! instead of `items`. Every number is a string `"p/q"` or an integer; decimals are rejected.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::catalog::Built;
use crate::error::{Error, Position, Result};
use crate::mechanisms::{KqusAgent, KqusInstance};
use crate::model::{Instance, Item, Model};
use crate::rational::Rational;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    capacity: Spanned<Rational>,
    #[serde(default)]
    kqus: bool,
    #[serde(default)]
    agents: Vec<AgentDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    id: Option<Spanned<String>>,
    model: Option<Spanned<String>>,
    items: Option<Vec<ItemDoc>>,
    ratio: Option<Spanned<Rational>>,
    size: Option<Spanned<Rational>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemDoc {
    id: Spanned<String>,
    value: Spanned<Rational>,
    size: Spanned<Rational>,
}

fn position(text: &str, offset: usize) -> Position {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Position { line, column }
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn field(&self, field: String, span: Range<usize>, message: impl std::fmt::Display) -> Error {
        Error::Field {
            field,
            message: format!("{}: {message}", position(self.text, span.start)),
        }
    }
}

/// Parses and validates a document.
pub fn parse_document(text: &str) -> Result<Built> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Syntax {
        position: position(text, e.span().map_or(0, |s| s.start)),
        message: e.message().trim().to_string(),
    })?;
    let ctx = Ctx { text };
    let capacity = doc.capacity.get_ref().clone();
    if !capacity.is_positive() {
        return Err(ctx.field("capacity".into(), doc.capacity.span(), "must be positive"));
    }
    if doc.agents.is_empty() {
        return Err(Error::Field {
            field: "agents".into(),
            message: "at least one agent is required".into(),
        });
    }
    if doc.kqus {
        parse_kqus(&ctx, capacity, doc.agents).map(Built::Kqus)
    } else {
        parse_items(&ctx, capacity, doc.agents).map(Built::Items)
    }
}

fn parse_items(ctx: &Ctx, capacity: Rational, agents: Vec<AgentDoc>) -> Result<Instance> {
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut out = Vec::with_capacity(agents.len());
    for (k, agent) in agents.into_iter().enumerate() {
        let path = format!("agents[{k}]");
        if let Some(extra) = agent.ratio.as_ref().or(agent.size.as_ref()) {
            return Err(ctx.field(
                path,
                extra.span(),
                "ratio and size belong to kqus documents",
            ));
        }
        let model = match &agent.model {
            Some(m) => m
                .get_ref()
                .parse::<Model>()
                .map_err(|e| ctx.field(format!("{path}.model"), m.span(), e))?,
            None => Model::default(),
        };
        let mut items = Vec::new();
        for (j, it) in agent.items.unwrap_or_default().into_iter().enumerate() {
            let ipath = format!("{path}.items[{j}]");
            let id = it.id.get_ref().clone();
            if id.is_empty() {
                return Err(ctx.field(format!("{ipath}.id"), it.id.span(), "empty id"));
            }
            if let Some(first) = seen.insert(id.clone(), ipath.clone()) {
                return Err(ctx.field(
                    format!("{ipath}.id"),
                    it.id.span(),
                    format!("duplicate item id {id:?} (first used at {first})"),
                ));
            }
            let (value, size) = (it.value.get_ref(), it.size.get_ref());
            if !value.is_positive() {
                return Err(ctx.field(
                    format!("{ipath}.value"),
                    it.value.span(),
                    format!("value {value} must be positive"),
                ));
            }
            if !size.is_positive() || size > &capacity {
                return Err(ctx.field(
                    format!("{ipath}.size"),
                    it.size.span(),
                    format!("size {size} is outside (0, {capacity}]"),
                ));
            }
            items.push(Item::new(id, k + 1, value.clone(), size.clone()));
        }
        out.push((model, items));
    }
    Instance::new(capacity, out)
}

fn parse_kqus(ctx: &Ctx, capacity: Rational, agents: Vec<AgentDoc>) -> Result<KqusInstance> {
    let mut out = Vec::with_capacity(agents.len());
    for (k, agent) in agents.into_iter().enumerate() {
        let path = format!("agents[{k}]");
        let missing = |what: &str| Error::Field {
            field: format!("{path}.{what}"),
            message: "required in kqus documents".into(),
        };
        if agent.items.is_some() || agent.model.is_some() {
            return Err(Error::Field {
                field: path,
                message: "kqus agents take id, ratio and size only".into(),
            });
        }
        let ratio = agent.ratio.ok_or_else(|| missing("ratio"))?;
        let size = agent.size.ok_or_else(|| missing("size"))?;
        if ratio.get_ref().is_negative() {
            return Err(ctx.field(
                format!("{path}.ratio"),
                ratio.span(),
                "ratio must be non-negative",
            ));
        }
        if !size.get_ref().is_positive() || size.get_ref() > &capacity {
            return Err(ctx.field(
                format!("{path}.size"),
                size.span(),
                format!("size {} is outside (0, {capacity}]", size.get_ref()),
            ));
        }
        out.push(KqusAgent {
            id: agent
                .id
                .map(Spanned::into_inner)
                .unwrap_or_else(|| format!("a{}", k + 1)),
            ratio: ratio.into_inner(),
            size: size.into_inner(),
        });
    }
    KqusInstance::with_agents(capacity, out)
}

/// Parses a document that must describe an item instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_document(text)?.into_items()
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Canonical text: agents in order, items sorted by id, numbers in lowest terms.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = format!("capacity = {}\n", quote(&instance.capacity().to_string()));
    for (k, agent) in instance.agents().iter().enumerate() {
        let _ = write!(
            out,
            "\n[[agents]]\nid = {}\nmodel = {}\n",
            quote(&(k + 1).to_string()),
            quote(agent.model.name())
        );
        if agent.items.is_empty() {
            out.push_str("items = []\n");
            continue;
        }
        out.push_str("items = [\n");
        for it in &agent.items {
            let _ = writeln!(
                out,
                "  {{ id = {}, value = {}, size = {} }},",
                quote(it.id()),
                quote(&it.value().to_string()),
                quote(&it.size().to_string())
            );
        }
        out.push_str("]\n");
    }
    out
}

pub fn serialize_kqus(kqus: &KqusInstance) -> String {
    let mut out = format!(
        "capacity = {}\nkqus = true\n",
        quote(&kqus.capacity().to_string())
    );
    for a in kqus.agents() {
        let _ = write!(
            out,
            "\n[[agents]]\nid = {}\nratio = {}\nsize = {}\n",
            quote(&a.id),
            quote(&a.ratio.to_string()),
            quote(&a.size.to_string())
        );
    }
    out
}

pub fn serialize(built: &Built) -> String {
    match built {
        Built::Items(inst) => serialize_instance(inst),
        Built::Kqus(k) => serialize_kqus(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip_catalog() {
        for e in catalog::list() {
            let built = catalog::build_default(e.name).unwrap();
            let text = serialize(&built);
            let back = parse_document(&text).unwrap();
            assert_eq!(back, built, "{}", e.name);
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn canonical_text() {
        let text = serialize_instance(&catalog::example1_instance1());
        assert_eq!(
            text,
            "capacity = \"1\"\n\n[[agents]]\nid = \"1\"\nmodel = \"understating\"\nitems = [\n  { id = \"a\", value = \"3/4\", size = \"1/2\" },\n]\n\n[[agents]]\nid = \"2\"\nmodel = \"understating\"\nitems = [\n  { id = \"c\", value = \"3/4\", size = \"1/2\" },\n  { id = \"d\", value = \"1\", size = \"1\" },\n]\n"
        );
    }

    #[test]
    fn decimals_rejected_with_position() {
        let text = "capacity = \"1\"\n[[agents]]\nitems = [{ id = \"a\", value = \"0.75\", size = \"1/2\" }]\n";
        let err = parse_document(text).unwrap_err();
        match &err {
            Error::Syntax { position, message } => {
                assert_eq!(position.line, 3);
                assert!(
                    message.contains("decimals not permitted; use 3/4"),
                    "{message}"
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        let bare = "capacity = \"1\"\n[[agents]]\nitems = [{ id = \"a\", value = 0.75, size = \"1/2\" }]\n";
        assert!(parse_document(bare)
            .unwrap_err()
            .to_string()
            .contains("use 3/4"));
    }

    #[test]
    fn validation_names_the_field() {
        let text = "capacity = \"1\"\n[[agents]]\nitems = [{ id = \"a\", value = \"1\", size = \"5/4\" }]\n";
        let err = parse_document(text).unwrap_err().to_string();
        assert!(err.starts_with("agents[0].items[0].size: line 3"), "{err}");
        let dup = "capacity = \"1\"\n[[agents]]\nitems = [{ id = \"a\", value = \"1\", size = \"1\" }]\n[[agents]]\nitems = [{ id = \"a\", value = \"1\", size = \"1\" }]\n";
        let err = parse_document(dup).unwrap_err().to_string();
        assert!(
            err.contains("agents[1].items[0].id: line 5") && err.contains("duplicate"),
            "{err}"
        );
        let model = "capacity = \"1\"\n[[agents]]\nmodel = \"sneaky\"\n";
        assert!(parse_document(model)
            .unwrap_err()
            .to_string()
            .starts_with("agents[0].model"));
        let unknown = "capacity = \"1\"\nweight = 3\n[[agents]]\n";
        assert!(matches!(parse_document(unknown), Err(Error::Syntax { .. })));
    }

    #[test]
    fn kqus_documents() {
        let text = "capacity = \"1\"\nkqus = true\n[[agents]]\nratio = \"3\"\nsize = \"1/2\"\n[[agents]]\nid = \"z\"\nratio = \"0\"\nsize = \"1\"\n";
        let k = parse_document(text).unwrap().into_kqus().unwrap();
        assert_eq!(k.agents()[0].id, "a1");
        assert_eq!(k.agents()[1].id, "z");
        let missing = "capacity = \"1\"\nkqus = true\n[[agents]]\nratio = \"3\"\n";
        assert!(parse_document(missing)
            .unwrap_err()
            .to_string()
            .contains("agents[0].size"));
    }
}
