mod common;
use common::{random_element, rng};
use noethera::algebra::parse_ring;
use noethera::noether::{fresh, Step};
use std::time::Instant;

#[test]
fn profile_seed_518() {
    let ring = parse_ring("Q[x,y]").unwrap();
    let mut r = rng(518);
    let (mut state, _) = fresh(&ring).unwrap();
    for _ in 0..30 {
        let x = random_element(&mut r, &ring, 4, 9);
        let t = Instant::now();
        match state.advance(&x).unwrap() {
            Step::Continue { bound, state: next } => {
                eprintln!("continue {bound} in {:?}", t.elapsed());
                state = next;
            }
            Step::Good(cert) => {
                eprintln!("good ({} bytes) in {:?}", format!("{:?}", cert.comb).len(), t.elapsed());
                break;
            }
        }
    }
}
