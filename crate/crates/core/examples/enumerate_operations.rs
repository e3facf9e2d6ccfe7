//! Lists the operation sets of a loop sequence with multiplicities.
//!
//! cargo run --example enumerate_operations -- "(0,0): +x +y -x -y; (1,0): +x +y -x -y" [group]

use std::collections::BTreeMap;

use masterloop::lattice::Lattice;
use masterloop::loops::{build_operation_sets, lengths_and_windings, padded_box, parse_sequence, OpKind};
use masterloop::verify::{coefficient_table, lhs_prefactor};
use masterloop::GroupSpec;

fn main() -> masterloop::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = args.first().map_or("(0,0): +x +y -x -y; (1,0): +x +y -x -y", String::as_str);
    let group: GroupSpec = args.get(1).map_or("SU(3)", String::as_str).parse()?;
    let d = text.split(':').next().unwrap().matches(',').count() + 1;

    let lat = Lattice::from_spec(&padded_box(&[text], d, 1)?)?;
    let s = parse_sequence(text, &lat)?;
    let (len, _, ell) = lengths_and_windings(&s);
    println!("s = {}", s.to_text(&lat));
    println!("|s| = {len}, ell = {ell}, {group} LHS prefactor = {}", lhs_prefactor(group, &s));

    let ops = build_operation_sets(&s, &lat)?;
    let coefficients: BTreeMap<OpKind, _> = coefficient_table(group).into_iter().collect();
    for kind in OpKind::ALL {
        let set = ops.get(kind);
        if set.is_empty() {
            continue;
        }
        let c = coefficients.get(&kind).map_or("not in the equation".to_string(), |c| format!("{:.4}", c.value(1.0)));
        println!("\n{} ({} elements, coefficient at beta=1: {c})", kind.label(), set.len());
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        for t in set {
            *tally.entry(t.sorted().to_text(&lat)).or_default() += 1;
        }
        for (t, m) in tally {
            println!("  {m:>3} x {t}");
        }
    }
    Ok(())
}
