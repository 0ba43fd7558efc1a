//! Construction of invertible matrix pairs (A, B) with prescribed eigenvalue
//! lists for A, B, and B*A^-1, built from weighted bipartite networks on
//! surfaces.
//!
//! The pipeline: eigenvalue data fixes the monodromies of a honeycomb network
//! on a torus (via explicit face coordinates); transfer matrices of the two
//! triangular cells assemble A and B; triangularity makes all three spectra
//! readable off diagonals. The same network machinery runs on higher-genus
//! surfaces with any number of punctures, where the library counts the free
//! parameters of the construction, and a lattice-polygon module realizes the
//! achievable puncture counts per genus constructively.

pub mod conjugation;
pub mod facecoords;
pub mod honeycomb;
pub mod intmat;
pub mod laurent;
pub mod matrix;
pub mod polygon;
pub mod report;
pub mod ribbon;
pub mod ring;
pub mod scalar;
pub mod surfaces;
pub mod transfer;
