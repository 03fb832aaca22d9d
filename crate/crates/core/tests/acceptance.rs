use effseq_core::verify::run_all;

fn main() {
    let reports = run_all();
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.number).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", reports.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
