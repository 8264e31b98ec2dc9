//! Companion crate to `maxtrust-core` carrying everything that needs the
//! operating system: matrix and ledger file formats, the router-network
//! simulator, the multi-condition experiment runner, and the `maxtrust`
//! command line tool.

pub mod experiment;
pub mod io;
pub mod sim;
