#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "heteronet/matrix.hpp"
#include "heteronet/network.hpp"
#include "heteronet/params.hpp"

namespace heteronet {

/// The three stability conditions on a full transition matrix:
///   I.   λ_max real,
///   II.  λ_max > 1,
///   III. all entries of w_max nonzero and of one sign.
struct PodviginaReport {
    std::string tag;
    bool lambda_real = false;
    bool lambda_tie = false;   // |λ1| == |λ2| with distinct eigenvalues: undetermined
    double lambda_max = 0.0;   // meaningful when lambda_real
    std::vector<double> w_max;
    bool cond_I = false;
    bool cond_II = false;
    bool cond_III = false;
};

PodviginaReport podvigina_check(const TransitionMatrix& m);

enum class Verdict { Fas, Acu, Cu, Undetermined };

std::string verdict_name(Verdict v);

struct CycleClassification {
    std::string cycle;
    Verdict verdict = Verdict::Undetermined;
    std::vector<std::string> reasons;        // sign conditions used
    std::map<std::string, double> signs;     // quantities backing the verdict
};

CycleClassification classify_cycle(NetworkKind kind, const std::string& cycle,
                                   const ParamSet& p);

/// Dual-path check of the border-collision/condition-III equivalence:
/// admissibility of a branch fixed point against condition III of the full
/// matrices based at the equilibria following a negative-entry basic map.
struct BcbAgreement {
    std::string fixed_point;
    std::vector<std::string> matrices;  // tags of the checked full matrices
    bool admissible = false;
    bool cond_III = false;              // conjunction over `matrices`
    bool match = false;
    bool skipped = false;
    std::string skip_reason;
};

std::vector<BcbAgreement> bcb_equivalence_check(NetworkKind kind, const ParamSet& p);

/// Image-zero verification for the generalized split matrices: for w in
/// the switching subspace, (m_123 w)_2 = 0 and (m_124 w)_1 = 0.
struct ZeroEntryCheck {
    double resid_123 = 0.0;  // |(m_123 w)_2|
    double resid_124 = 0.0;  // |(m_124 w)_1|
    double w_norm = 0.0;
    bool ok = false;         // both residuals <= 1e-14 * ||w||
};

ZeroEntryCheck general_bcb_check(int n, const ParamSet& p, std::span<const double> w);

enum class BifurcationKind { BorderCollision, Fold, Transcritical };

std::string bifurcation_kind_name(BifurcationKind k);

struct BifurcationEvent {
    BifurcationKind kind = BifurcationKind::BorderCollision;
    std::string subject;     // fixed point / cycle affected
    std::string monitor;     // sign quantity that crossed zero
    double locus = 0.0;      // parameter value on the path
    double residual = 0.0;   // |monitor| at the locus
    double crosscheck = 0.0; // distance used by the per-kind validation
    bool validated = false;
};

/// Scan `samples` points of p[key] over [lo, hi], bracket sign changes of
/// the applicable monitors, and bisect each to |monitor| <= 1e-10.
std::vector<BifurcationEvent> detect_bifurcations(NetworkKind kind, const ParamSet& base,
                                                  const std::string& key, double lo, double hi,
                                                  int samples);

struct ScanAxis {
    std::string key;
    double lo = 0.0, hi = 1.0;
    int steps = 1;

    double value(int i) const;
};

struct ScanCell {
    double x = 0.0, y = 0.0;
    std::vector<CycleClassification> cycles;
};

struct ScanResult {
    ScanAxis axis1, axis2;
    std::vector<ScanCell> cells;  // row-major over (axis1, axis2)
};

/// Per-cell cycle classification over a parameter plane. Cells are
/// independent; evaluation parallelizes up to HETERONET_THREADS.
ScanResult scan_plane(NetworkKind kind, const ParamSet& base, const ScanAxis& axis1,
                      const ScanAxis& axis2);

}  // namespace heteronet
