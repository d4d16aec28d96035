use std::fmt::Write;

use crate::mapping::{is_ncname, Characteristic, OntologyModel, XSD};

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            c => out.push(c),
        }
    }
    out
}

/// Element name for a property IRI: `ont:local` under the base namespace,
/// otherwise a name with its own `xmlns:p` declaration.
fn property_element(iri: &str, base: &str) -> (String, String) {
    if let Some(local) = iri.strip_prefix(base).filter(|l| is_ncname(l)) {
        return (format!("ont:{local}"), String::new());
    }
    let mut split = iri.len();
    for (i, _) in iri.char_indices().rev() {
        if is_ncname(&iri[i..]) {
            split = i;
        }
    }
    let (ns, local) = iri.split_at(split);
    let local = if local.is_empty() { "_" } else { local };
    (format!("p:{local}"), format!(" xmlns:p=\"{}\"", escape(ns)))
}

/// RDF/XML with full IRIs in `rdf:about`. Sections appear in the order
/// classes, datatype properties, object properties, restrictions, individuals,
/// each sorted by IRI.
pub fn write_rdf_xml(model: &OntologyModel) -> String {
    let base = model.base_iri.as_str();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<rdf:RDF xmlns:rdf=\"{RDF}\"");
    let _ = writeln!(out, "         xmlns:rdfs=\"{RDFS}\"");
    let _ = writeln!(out, "         xmlns:owl=\"{OWL}\"");
    let _ = writeln!(out, "         xmlns:xsd=\"{XSD}\"");
    let _ = writeln!(out, "         xmlns:ont=\"{}\">", escape(base));
    let ontology = base.trim_end_matches(['#', '/']);
    let _ = writeln!(out, "  <owl:Ontology rdf:about=\"{}\"/>", escape(ontology));

    let mut classes: Vec<_> = model.classes.iter().collect();
    classes.sort_by(|a, b| a.iri.cmp(&b.iri));
    for c in classes {
        let _ = writeln!(out, "  <owl:Class rdf:about=\"{}\">", escape(&c.iri));
        let _ = writeln!(out, "    <rdfs:label>{}</rdfs:label>", escape(&c.label));
        for s in &c.superclasses {
            let _ = writeln!(out, "    <rdfs:subClassOf rdf:resource=\"{}\"/>", escape(s));
        }
        out.push_str("  </owl:Class>\n");
    }

    let mut dt: Vec<_> = model.datatype_properties.iter().collect();
    dt.sort_by(|a, b| a.iri.cmp(&b.iri));
    for p in dt {
        let _ = writeln!(out, "  <owl:DatatypeProperty rdf:about=\"{}\">", escape(&p.iri));
        let _ = writeln!(out, "    <rdfs:label>{}</rdfs:label>", escape(&p.label));
        let _ = writeln!(out, "    <rdfs:domain rdf:resource=\"{}\"/>", escape(&p.domain));
        let _ = writeln!(out, "    <rdfs:range rdf:resource=\"{}\"/>", p.range.iri());
        out.push_str("  </owl:DatatypeProperty>\n");
    }

    let mut obj: Vec<_> = model.object_properties.iter().collect();
    obj.sort_by(|a, b| a.iri.cmp(&b.iri));
    for p in obj {
        let _ = writeln!(out, "  <owl:ObjectProperty rdf:about=\"{}\">", escape(&p.iri));
        let kind = match p.characteristic {
            Characteristic::Functional => Some("FunctionalProperty"),
            Characteristic::InverseFunctional => Some("InverseFunctionalProperty"),
            Characteristic::None => None,
        };
        if let Some(kind) = kind {
            let _ = writeln!(out, "    <rdf:type rdf:resource=\"{OWL}{kind}\"/>");
        }
        let _ = writeln!(out, "    <rdfs:label>{}</rdfs:label>", escape(&p.label));
        let _ = writeln!(out, "    <rdfs:domain rdf:resource=\"{}\"/>", escape(&p.domain));
        let _ = writeln!(out, "    <rdfs:range rdf:resource=\"{}\"/>", escape(&p.range));
        if let Some(inv) = &p.inverse_of {
            let _ = writeln!(out, "    <owl:inverseOf rdf:resource=\"{}\"/>", escape(inv));
        }
        out.push_str("  </owl:ObjectProperty>\n");
    }

    let mut restrictions: Vec<_> = model.restrictions.iter().collect();
    restrictions.sort_by(|a, b| (&a.on_class, &a.on_property).cmp(&(&b.on_class, &b.on_property)));
    for r in restrictions {
        let _ = writeln!(out, "  <owl:Class rdf:about=\"{}\">", escape(&r.on_class));
        out.push_str("    <rdfs:subClassOf>\n      <owl:Restriction>\n");
        let _ = writeln!(out, "        <owl:onProperty rdf:resource=\"{}\"/>", escape(&r.on_property));
        let _ = writeln!(
            out,
            "        <owl:minCardinality rdf:datatype=\"{XSD}nonNegativeInteger\">{}</owl:minCardinality>",
            r.min_cardinality
        );
        let _ = writeln!(
            out,
            "        <owl:maxCardinality rdf:datatype=\"{XSD}nonNegativeInteger\">{}</owl:maxCardinality>",
            r.max_cardinality
        );
        out.push_str("      </owl:Restriction>\n    </rdfs:subClassOf>\n  </owl:Class>\n");
    }

    let mut individuals: Vec<_> = model.individuals.iter().collect();
    individuals.sort_by(|a, b| a.iri.cmp(&b.iri));
    for ind in individuals {
        let _ = writeln!(out, "  <owl:NamedIndividual rdf:about=\"{}\">", escape(&ind.iri));
        let _ = writeln!(out, "    <rdf:type rdf:resource=\"{}\"/>", escape(&ind.class_iri));
        for (prop, lit) in &ind.datatype_assertions {
            let (name, ns) = property_element(prop, base);
            let _ = writeln!(
                out,
                "    <{name}{ns} rdf:datatype=\"{}\">{}</{name}>",
                lit.datatype.iri(),
                escape(&lit.lexical)
            );
        }
        for (prop, targets) in &ind.object_assertions {
            let (name, ns) = property_element(prop, base);
            for t in targets {
                let _ = writeln!(out, "    <{name}{ns} rdf:resource=\"{}\"/>", escape(t));
            }
        }
        out.push_str("  </owl:NamedIndividual>\n");
    }

    out.push_str("</rdf:RDF>\n");
    out
}
