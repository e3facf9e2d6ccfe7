//! Saves a chain mid-run, restores it, and checks the continuation is identical.
//!
//! cargo run --example checkpoint_resume

use std::sync::Arc;

use masterloop::lattice::Lattice;
use masterloop::sampler::{Chain, Checkpoint};
use masterloop::{ActionParams, ChainConfig, GroupSpec, Scheme};

fn main() -> masterloop::Result<()> {
    let lat = Arc::new(Lattice::new(2, &[0, 0], &[3, 3])?);
    let params = ActionParams::new(0.5, GroupSpec::su(2)?)?;
    let cfg = ChainConfig::new(Scheme::Metropolis, 1.2, 0, 42);
    let mut chain = Chain::new(lat, params, &cfg, 0);
    for _ in 0..100 {
        chain.advance()?;
    }

    let path = std::env::temp_dir().join("masterloop_checkpoint.json");
    chain.checkpoint().save(&path)?;
    let mut resumed = Chain::restore(&Checkpoint::load(&path)?)?;
    for _ in 0..100 {
        chain.advance()?;
        resumed.advance()?;
    }
    let same = chain.configuration().links() == resumed.configuration().links();
    println!("checkpoint at {}", path.display());
    println!("after {} sweeps: acceptance {:.3}, continuation identical: {same}", chain.sweeps(), chain.acceptance_rate());
    std::fs::remove_file(&path)?;
    Ok(())
}
