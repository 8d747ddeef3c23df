//! The bundled demo grammar.

use crate::lexicon::Grammar;

pub const ONTOLOGY: &str = include_str!("../data/demo.ontology");
pub const LEXICON: &str = include_str!("../data/demo.lexicon");

/// Syntax trees paired with a short gloss.
pub const TREES: &[(&str, &str)] = &[
    ("the Brits love France", "(node (node loves France) the_Brits)"),
    ("this book is interesting and heavy", "(node (node (node and interesting) heavy) this_book)"),
    (
        "Liverpool is a poor town and an important harbour",
        "(node (node (node and poor_town) important_harbour) Liverpool)",
    ),
    (
        "Liverpool is a poor town and defeated Chelsea",
        "(node (node (node and poor_town) (node defeated Chelsea)) Liverpool)",
    ),
    ("the table barks", "(node barks table)"),
    (
        "most of the students that passed logic passed topology",
        "(node (node passed topology) (node most_of_the (node students_that_passed logic)))",
    ),
    ("Carlotta is tall", "(node tall Carlotta)"),
];

pub fn grammar() -> Grammar {
    Grammar::from_sources([ONTOLOGY, LEXICON]).expect("demo grammar is well formed")
}
