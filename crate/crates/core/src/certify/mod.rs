//! Certification engine.

pub mod budget;
pub mod cache;
pub mod certificate;
pub mod coset;
pub mod finite;
pub mod homsearch;
pub mod pipeline;
pub mod report;
pub mod search;

pub use budget::{Budget, Deadline};
pub use cache::{CacheCheck, CacheEntry, CacheListing, CertificateCache, CACHE_ENV};
pub use certificate::{
    free_product_word, BoundKind, Certificate, CertificateKind, Direction, Invariant, Payload,
    Replay, SweepCell, WitnessRelator,
};
pub use coset::{todd_coxeter, todd_coxeter_with_deadline, CosetStatus, CosetTable};
pub use finite::{group, FiniteGroup, FiniteGroupSpec, Perm, EXTENDED_LADDER, LADDER};
pub use homsearch::{find_hom, hom_search, PermHom, SearchOptions};
pub use pipeline::{
    lower_bound_afw_two, verify_freiheitssatz_instance, verify_fusion_bound, verify_nonadditivity,
    NonAdditivity,
};
pub use report::{
    invariant_report, Annotation, Bound, BoundSource, Construction, Geometric, InvariantBounds,
    InvariantReport, Relation, ReportOptions,
};
pub use search::{
    certify_infinite_cyclic, certify_nonabelian_quotient, combined_relator, search_upper_bound,
    search_witnesses, search_witnesses_from,
};
