use std::path::PathBuf;
use std::process::{Command as Proc, Output};

use divsys::{close_elimination, pzero, DivConstraint, DivSystem, LinearPoly, VarOrder};
use ipgcd::{GcdConstraint, Inequality, IpGcdInstance, Objective, Rel, Sense};
use ipgcd_cli::{parse, DivFile, Parsed};
use oracle::{enumerate_solutions, Window};
use proptest::prelude::*;
use serde_json::Value;

const NAMES: [&str; 4] = ["x", "y", "z_1", "w"];

fn write(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn ipgcd(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_ipgcd")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn poly(n: usize) -> impl Strategy<Value = LinearPoly> {
    (prop::collection::vec(-5i64..=5, n), -9i64..=9).prop_map(|(a, c)| {
        let terms: Vec<(usize, i64)> = a.into_iter().enumerate().collect();
        LinearPoly::from_i64(&terms, c)
    })
}

fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![Just(Rel::Le), Just(Rel::Eq), Just(Rel::Ne), Just(Rel::Ge)]
}

fn instance() -> impl Strategy<Value = IpGcdInstance> {
    (1usize..=4).prop_flat_map(|n| {
        let gcd = (poly(n), poly(n), rel(), 1i64..=9).prop_map(|(f, g, r, c)| GcdConstraint::new(f, g, r, c));
        let obj = prop::option::of((poly(n), any::<bool>()).prop_map(|(poly, min)| Objective {
            poly,
            sense: if min { Sense::Minimize } else { Sense::Maximize },
        }));
        (prop::collection::vec(poly(n), 0..4), prop::collection::vec(gcd, 0..3), obj).prop_map(move |(rows, gcds, objective)| {
            IpGcdInstance {
                names: NAMES[..n].iter().map(|s| s.to_string()).collect(),
                rows: rows.into_iter().map(|poly| Inequality { poly }).collect(),
                gcds,
                objective,
            }
        })
    })
}

fn div_file() -> impl Strategy<Value = DivFile> {
    (1usize..=4).prop_flat_map(|n| {
        let con = (poly(n), poly(n)).prop_filter("non-zero lhs", |(f, _)| !f.is_zero());
        (prop::collection::vec(con, 1..4), any::<bool>()).prop_map(move |(cons, blocks)| DivFile {
            names: NAMES[..n].iter().map(|s| s.to_string()).collect(),
            system: DivSystem::new((0..n).collect(), cons.into_iter().map(|(f, g)| DivConstraint::new(f, g)).collect()).unwrap(),
            partition: blocks.then(|| (0..n).map(|v| vec![v]).collect()),
        })
    })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(p in prop_oneof![instance().prop_map(Parsed::Ip), div_file().prop_map(Parsed::Div)]) {
        let printed = p.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(&back, &p, "printed as:\n{}", printed);
        prop_assert_eq!(parse(&back.to_string()).unwrap(), back);
    }
}

#[test]
fn solve_prints_a_witness() {
    let f = write("feasible.ipgcd", "vars x y\nx >= 1\ny >= 1\nx + y <= 12\ngcd(x, y) = 3\n");
    let out = ipgcd(&["solve", "--json", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "Feasible");
    let x: i64 = v["witness"]["x"].as_str().unwrap().parse().unwrap();
    let y: i64 = v["witness"]["y"].as_str().unwrap().parse().unwrap();
    assert!(x >= 1 && y >= 1 && x + y <= 12);
    assert_eq!(num_integer::gcd(x, y), 3);
    for key in ["triples", "primes", "scan_steps"] {
        assert!(v["stats"][key].as_str().unwrap().parse::<u64>().is_ok());
    }
}

#[test]
fn check_exit_codes() {
    let yes = write("check_yes.ipgcd", "vars x\nx >= 1\nx <= 10\ngcd(x, 10) = 5\n");
    let no = write("check_no.ipgcd", "vars x\nx >= 1\nx <= 4\ngcd(x, 10) = 5\n");
    let bad = write("check_bad.ipgcd", "vars x\ngcd(x) = 1\n");
    let out = ipgcd(&["check", "--json", yes.to_str().unwrap()]);
    assert_eq!((out.status.code(), json(&out)["witness"].clone()), (Some(0), Value::Null));
    assert_eq!(ipgcd(&["check", "--json", no.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ipgcd(&["solve", "--json", no.to_str().unwrap()]).status.code(), Some(0));
    let out = ipgcd(&["check", "--json", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["stage"], "parse");
    assert_eq!(ipgcd(&["check", "--json", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn optimize_reports_the_value() {
    let f = write("opt.ipgcd", "vars x\nminimize x\nx >= 3\ngcd(x, 4) = 2\n");
    let out = ipgcd(&["optimize", "--json", f.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!((v["status"].as_str(), v["objective_value"].as_str()), (Some("Optimal"), Some("6")));
    let f = write("unb.ipgcd", "vars x\nmaximize x\nx >= 1\n");
    assert_eq!(json(&ipgcd(&["optimize", "--json", f.to_str().unwrap()]))["status"], "Unbounded");
}

#[test]
fn analyze_lists_pzero_of_the_closure() {
    let text = "vars x y\ndiv: x + 1 | y - 2\ndiv: 2 x + 3 | 3 y\nincreasing x | y\n";
    let f = write("sys.div", text);
    let v = json(&ipgcd(&["analyze", "--json", f.to_str().unwrap()]));
    let Ok(Parsed::Div(d)) = parse(text) else { panic!() };
    let order = VarOrder::new(vec![0, 1]).unwrap();
    let expected: Vec<String> = pzero(&close_elimination(&d.system, &order), &order).unwrap().iter().map(|p| p.to_string()).collect();
    let listed: Vec<String> = v["analysis"]["pzero"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    assert_eq!(listed, expected);
    assert_eq!(v["analysis"]["increasing"], true);
}

#[test]
fn divisibility_file_is_solved() {
    let f = write("inc.div", "vars x y\ndiv: x + 1 | y - 2\nincreasing x | y\n");
    let v = json(&ipgcd(&["solve", "--json", f.to_str().unwrap()]));
    assert_eq!(v["status"], "Feasible");
    let x: i64 = v["witness"]["x"].as_str().unwrap().parse().unwrap();
    let y: i64 = v["witness"]["y"].as_str().unwrap().parse().unwrap();
    assert_eq!((y - 2) % (x + 1), 0);
}

#[test]
fn oracle_lists_window_solutions_in_order() {
    let text = "vars x y\nx + y <= 4\ngcd(x, y) = 2\n";
    let f = write("orc.ipgcd", text);
    let v = json(&ipgcd(&["oracle", "--window", "10", "--json", f.to_str().unwrap()]));
    let Ok(Parsed::Ip(inst)) = parse(text) else { panic!() };
    let expected = enumerate_solutions(&inst, &Window::cube(2, -10, 10).unwrap()).unwrap();
    let listed: Vec<Vec<i128>> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| ["x", "y"].iter().map(|k| w[k].as_str().unwrap().parse().unwrap()).collect())
        .collect();
    assert_eq!(listed, expected);
    assert_eq!(v["status"], "Feasible");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let f = write("det.ipgcd", "vars x y\nminimize x + y\nx >= 1\ny >= 1\ngcd(x, y) = 2\ngcd(x + 1, 3) = 3\n");
    for flags in [vec!["optimize", "--json"], vec!["solve", "--text"], vec!["analyze", "--json", "--parallel", "3"]] {
        let mut args = flags.clone();
        args.push(f.to_str().unwrap());
        let a = ipgcd(&args);
        let b = ipgcd(&args);
        assert_eq!(a.stdout, b.stdout, "flags {flags:?}");
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn mixed_file_is_rejected() {
    let f = write("mixed.ipgcd", "vars x y\ngcd(x, y) = 1\ndiv: x | y\n");
    let out = ipgcd(&["solve", "--json", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("line 3"));
}
