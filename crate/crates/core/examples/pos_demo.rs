use paes_core::text_prep::analyze;
fn main() {
    let text = std::env::args().nth(1).unwrap();
    for s in analyze(&text) {
        let v: Vec<String> = s
            .tokens
            .iter()
            .zip(&s.tags)
            .map(|(t, g)| format!("{}/{}", t.surface, g))
            .collect();
        println!("{}", v.join(" "));
    }
}
