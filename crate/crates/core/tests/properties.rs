//! Property suite over the small-structure corpus.
mod props;

#[test]
fn composition_closure() {
    match props::composition_closure() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn counting_identity() {
    match props::counting_identity() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn canonical_invariance() {
    match props::canonical_invariance() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn canonical_separates() {
    match props::canonical_separates() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn thick_pullback() {
    match props::thick_pullback() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn thick_pullback_middle_gap() {
    match props::thick_pullback_middle_gap() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn ramsey_monotonicity() {
    match props::ramsey_monotonicity() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn partition_thickness() {
    match props::partition_thickness() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn bad_coloring_splits() {
    match props::bad_coloring_splits() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn large_colorings_have_thick_class() {
    match props::large_colorings_have_thick_class() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn coloring_laws() {
    match props::coloring_laws() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn syndetic_pullback() {
    match props::syndetic_pullback() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn ap_from_rp() {
    match props::ap_from_rp() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn arrow_symmetry() {
    match props::arrow_symmetry() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn cnf_agrees() {
    match props::cnf_agrees() {
        Ok(msg) => println!("{msg}"),
        Err(e) => panic!("{e}"),
    }
}
