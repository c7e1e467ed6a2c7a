use std::fmt::Write;
use std::time::{Duration, Instant};

use qcstern::fiatshamir::{expected_signature_bits, sign, verify_signature};
use qcstern::protocol::keygen;
use qcstern::seedexp::{expand_seed, DomainTag};
use qcstern::{Error, ParameterSet, Seed};

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Signs `iterations` distinct messages under one key and summarizes sizes
/// and timings. Everything derives from `root`, so runs are reproducible.
pub fn run(params: &ParameterSet, iterations: usize, root: &Seed) -> Result<String, Error> {
    let (sk, pk) = keygen(params, root)?;
    let mut sizes = Vec::with_capacity(iterations);
    let (mut t_sign, mut t_verify) = (Duration::ZERO, Duration::ZERO);
    for i in 0..iterations {
        let msg = (i as u64).to_be_bytes();
        let rand = expand_seed(root, DomainTag::Msg, i as u32);
        let t0 = Instant::now();
        let sig = sign(&sk, &pk, params, &msg, &rand)?;
        let t1 = Instant::now();
        if !verify_signature(&pk, params, &msg, &sig) {
            return Err(Error::Protocol(format!("signature {i} failed to verify")));
        }
        t_sign += t1 - t0;
        t_verify += t1.elapsed();
        sizes.push(sig.byte_len());
    }
    let mean = sizes.iter().sum::<usize>() as f64 / iterations as f64;
    let min = *sizes.iter().min().unwrap();
    let max = *sizes.iter().max().unwrap();
    let expected = expected_signature_bits(params);
    let n = iterations as f64;

    let mut out = String::new();
    let _ = writeln!(out, "parameter set        {params}");
    let _ = writeln!(out, "signatures           {iterations}");
    let _ = writeln!(out, "size mean            {mean:.1} B");
    let _ = writeln!(out, "size min / max       {min} / {max} B");
    let _ = writeln!(out, "expected (exact)     {:.1} B", expected.exact / 8.0);
    let _ = writeln!(out, "expected (formula)   {:.1} B", expected.closed_form / 8.0);
    let _ = writeln!(
        out,
        "mean / exact         {:+.3} %",
        100.0 * (mean * 8.0 / expected.exact - 1.0)
    );
    let _ = writeln!(out, "sign                 {:.3} ms", ms(t_sign) / n);
    let _ = writeln!(out, "verify               {:.3} ms", ms(t_verify) / n);
    Ok(out)
}
