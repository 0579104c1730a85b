//! Vertex counts of the four copula families against the reference table.
//!
//! The largest cell takes a few seconds in release mode.

use dcopula::census::table1;

fn main() {
    let cells = table1().unwrap();
    println!("{:<5}{:>6}{:>10}{:>10}", "", "p x q", "computed", "expected");
    for c in &cells {
        let mark = if c.matches() { "" } else { "  <-" };
        println!("{:<5}{:>6}{:>10}{:>10}{mark}", c.family, format!("{}x{}", c.p, c.q), c.computed, c.expected);
    }
}
