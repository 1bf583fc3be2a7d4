mod polynomial_arithmetic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/polynomial_arithmetic.rs"));
}

mod irreducibles {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/irreducibles.rs"));
}

mod residue_symbols {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/residue_symbols.rs"));
}

mod l_functions {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/l_functions.rs"));
}

mod approximate_functional_equation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/approximate_functional_equation.rs"));
}

mod weil_scan {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weil_scan.rs"));
}

mod resonator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/resonator.rs"));
}

mod resonance_experiment {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/resonance_experiment.rs"));
}

#[test]
fn polynomial_arithmetic_example_runs() {
    polynomial_arithmetic::run_example().expect("polynomial_arithmetic example should run");
}

#[test]
fn irreducibles_example_runs() {
    irreducibles::run_example().expect("irreducibles example should run");
}

#[test]
fn residue_symbols_example_runs() {
    residue_symbols::run_example().expect("residue_symbols example should run");
}

#[test]
fn l_functions_example_runs() {
    l_functions::run_example().expect("l_functions example should run");
}

#[test]
fn approximate_functional_equation_example_runs() {
    approximate_functional_equation::run_example().expect("approximate_functional_equation example should run");
}

#[test]
fn weil_scan_example_runs() {
    weil_scan::run_example().expect("weil_scan example should run");
}

#[test]
fn resonator_example_runs() {
    resonator::run_example().expect("resonator example should run");
}

#[test]
fn resonance_experiment_example_runs() {
    resonance_experiment::run_example().expect("resonance_experiment example should run");
}
