//! The built-in theory catalog: every worked example, fully declared in the
//! `.theory` DSL and parsed at first use.

use super::dsl::parse_theory;
use super::theory::Theory;
use std::collections::BTreeMap;
use std::sync::OnceLock;

macro_rules! catalog_entries {
    ($(($name:literal, $file:literal)),* $(,)?) => {
        pub const BUILTIN_NAMES: &[&str] = &[$($name),*];
        fn sources() -> Vec<(&'static str, &'static str, &'static str)> {
            vec![$(($name, $file, include_str!(concat!("catalog/", $file)))),*]
        }
    };
}

catalog_entries![
    ("ym", "ym.theory"),
    ("mym", "mym.theory"),
    ("mmaxwell", "mmaxwell.theory"),
    ("cs", "cs.theory"),
    ("cs-abelian", "cs-abelian.theory"),
    ("grav3d-lambda", "grav3d-lambda.theory"),
    ("grav3d-flat-transl", "grav3d-flat-transl.theory"),
    ("grav3d-lambda-transl", "grav3d-lambda-transl.theory"),
    ("ec", "ec.theory"),
    ("ec-lambda", "ec-lambda.theory"),
    ("euler", "euler.theory"),
    ("mm", "mm.theory"),
    ("lqg-holst", "lqg-holst.theory"),
];

fn catalog() -> &'static BTreeMap<String, Theory> {
    static CATALOG: OnceLock<BTreeMap<String, Theory>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut map = BTreeMap::new();
        for (name, file, src) in sources() {
            let th = parse_theory(src, file)
                .unwrap_or_else(|e| panic!("catalog theory `{name}` failed to load: {e}"));
            assert_eq!(th.id, name, "catalog id mismatch in {file}");
            map.insert(name.to_string(), th);
        }
        map
    })
}

/// Load a built-in theory by name.
pub fn builtin(name: &str) -> Result<Theory, String> {
    catalog()
        .get(name)
        .cloned()
        .ok_or_else(|| format!("unknown builtin theory `{name}` (try `list`)"))
}

/// Raw DSL source of a built-in theory (round-trip tests, docs).
pub fn builtin_source(name: &str) -> Option<&'static str> {
    sources().into_iter().find(|(n, _, _)| *n == name).map(|(_, _, s)| s)
}
