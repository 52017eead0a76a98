use massey::{corpus, engine, field::FieldDescriptor, dsl::parse_rational};
fn main() {
    let a = corpus::build("quadruple", None).unwrap();
    let zx = a.class_of(&a.generator_element("x").unwrap()).unwrap();
    let zy = a.class_of(&a.generator_element("y").unwrap()).unwrap();
    let classes = vec![zx.clone(), zy.clone(), zy.clone(), zx.clone()];
    let out = engine::decide(&a, &classes, a.descriptor()).unwrap();
    let r = out.obstruction.unwrap();
    println!("Q: kind={} eq={:?} detail={}", r.kind, r.equation, r.detail);
    let g = FieldDescriptor::quadratic(parse_rational("-1").unwrap()).unwrap();
    let out2 = engine::decide(&a, &classes, &g).unwrap();
    for (k, v) in out2.witness.as_ref().unwrap() {
        if !v.is_zero() { println!("witness {k} = {v}"); }
    }
    let ds = out2.witness_system.as_ref().unwrap();
    let ext = out2.extended_algebra.as_ref().unwrap();
    for (i,j) in [(1,2),(2,3),(3,4),(1,3),(2,4)] {
        println!("a[{i},{j}] = {}", ext.format_element(ds.entry(i,j)));
    }
    // the generic problem display
    let p = engine::generic_defining_system(&a, &classes, &Default::default()).unwrap();
    println!("WD eqs: {:?}", p.well_definedness.display_equations());
    println!("TRIV eqs: {:?}", p.triviality.display_equations());
}
