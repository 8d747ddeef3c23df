use specimen_core::batch::Execution;
use specimen_core::compose::{readings, ComposeConfig, ComposeError, Reading, SyntaxTree, TreePath};
use specimen_core::demo;
use specimen_core::kernel::{is_normal, type_of, Env, Type};
use specimen_core::lexicon::{CoercionKind, Grammar};

fn trees() -> Vec<SyntaxTree> {
    demo::TREES.iter().map(|(_, t)| SyntaxTree::parse(t).unwrap()).collect()
}

fn config(max_depth: usize) -> ComposeConfig {
    ComposeConfig { max_depth, ..Default::default() }
}

fn read(tree: &SyntaxTree, g: &Grammar, depth: usize) -> Result<Vec<Reading>, ComposeError> {
    readings(tree, g, &config(depth))
}

#[test]
fn every_reading_is_closed_normal_and_propositional() {
    let g = demo::grammar();
    for tree in trees() {
        for r in read(&tree, &g, 3).unwrap_or_default() {
            assert!(r.term.is_closed(), "{}", r.term);
            assert!(is_normal(&r.term), "{}", r.term);
            assert_eq!(type_of(&r.term, &g.signature, &Env::new()).unwrap(), Type::prop());
        }
    }
}

#[test]
fn no_trace_holds_a_forbidden_pair() {
    let g = demo::grammar();
    for tree in trees() {
        for r in read(&tree, &g, 3).unwrap_or_default() {
            let lexical: Vec<_> = r.trace.iter().filter(|u| u.kind == CoercionKind::Lexical).collect();
            for (i, u) in lexical.iter().enumerate() {
                for v in &lexical[i + 1..] {
                    let clash = u.at == v.at && u.coercion != v.coercion && (u.exclusive || v.exclusive);
                    assert!(!clash, "{u} / {v} in {tree}");
                }
            }
        }
    }
}

#[test]
fn dropping_exclusivity_only_adds_readings() {
    let g = demo::grammar();
    let relaxed = Grammar { lexicon: g.lexicon.without_exclusivity(), ..g.clone() };
    for tree in trees() {
        let strict = read(&tree, &g, 3).unwrap_or_default();
        let loose = read(&tree, &relaxed, 3).unwrap_or_default();
        for r in &strict {
            assert!(loose.iter().any(|l| l.term == r.term), "{} lost in {tree}", r.term);
        }
    }
    // The defeated/harbour sentence is blocked only by exclusivity.
    let t = SyntaxTree::parse(demo::TREES[3].1).unwrap();
    assert!(matches!(read(&t, &g, 3), Err(ComposeError::NoReading { .. })));
    assert_eq!(read(&t, &relaxed, 3).unwrap().len(), 1);
}

#[test]
fn deeper_search_keeps_every_shallower_reading() {
    let g = demo::grammar();
    for tree in trees() {
        for d in 0..4 {
            let shallow = read(&tree, &g, d).unwrap_or_default();
            let deep = read(&tree, &g, d + 1).unwrap_or_default();
            for r in &shallow {
                assert!(deep.iter().any(|x| x.term == r.term && x.trace == r.trace), "depth {d}: {tree}");
            }
        }
    }
    let brits = SyntaxTree::parse(demo::TREES[0].1).unwrap();
    assert!(read(&brits, &g, 1).is_err());
    assert_eq!(read(&brits, &g, 2).unwrap().len(), 1);
}

#[test]
fn readings_are_deterministic_in_both_modes() {
    let g = demo::grammar();
    for tree in trees() {
        let a = readings(&tree, &g, &ComposeConfig { execution: Execution::Parallel, ..Default::default() });
        let b = readings(&tree, &g, &ComposeConfig { execution: Execution::Sequential, ..Default::default() });
        let c = readings(&tree, &g, &ComposeConfig::default());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}

#[test]
fn brits_need_no_type_raising() {
    // The subject slot takes an entity, not a generalised quantifier.
    let g = demo::grammar();
    let tree = SyntaxTree::parse(demo::TREES[0].1).unwrap();
    let r = &read(&tree, &g, 3).unwrap()[0];
    let mut entity_args = 0;
    r.composed.walk(&mut |t| {
        if let specimen_core::kernel::Term::TyApp(_, ty) = t {
            assert!(ty.as_entity().is_some(), "type argument {ty} is not an entity sort");
            entity_args += 1;
        }
    });
    assert_eq!(entity_args, 1);
    assert!(r.instantiations.is_empty());
}

#[test]
fn no_reading_pinpoints_the_application() {
    let g = demo::grammar();
    let tree = SyntaxTree::parse("(node (node loves (node barks table)) the_Brits)").unwrap();
    let Err(ComposeError::NoReading { site, .. }) = read(&tree, &g, 3) else { panic!() };
    assert_eq!(site, TreePath(vec![0, 1]));

    let tree = SyntaxTree::parse("(node loves France)").unwrap();
    let err = read(&tree, &g, 3).unwrap_err();
    assert!(err.to_string().contains("does not reach sort t"), "{err}");
}
