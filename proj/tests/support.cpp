#include "support.hpp"

#include <stdexcept>

namespace testsupport {

// Constructed parameter sets realizing the dynamical regimes exercised by
// the acceptance suite. Sign conditions are asserted where they are used.
ParamSet regime_params(const std::string& name) {
    auto ks = [](double c13, double c14, double t34, double c42, double e24) {
        ParamSet p = all_ones(NetworkKind::KirkSilber);
        p["c_13"] = c13;
        p["c_14"] = c14;
        p["t_34"] = t34;
        p["c_42"] = c42;
        p["e_24"] = e24;
        return p;
    };
    if (name == "ks_fas_c3")  // delta3=1.5, nu3=0.3>0; delta4=0.8<1
        return ks(1.5, 0.8, 1.0, 1.0, 1.0);
    if (name == "ks_acu_switch")  // delta3=2, nu3=-1; delta4=1.35, nu4>0
        return ks(2.0, 0.9, 0.1, 1.5, 1.0);
    if (name == "ks_cu_switch")  // delta3=0.8, nu3=-1.1; delta4=1.2, nu4>0
        return ks(0.8, 0.3, 0.2, 8.0, 2.0);

    if (name == "dc_admissible_fold") {  // zeta<0, beta<0, nu4>0, omega>0, bistable
        ParamSet p = all_ones(NetworkKind::DeltaClique);
        p["t_31"] = 0.25;
        p["c_32"] = 2.5;
        p["c_42"] = 1.4;
        p["t_13"] = 0.1;
        p["c_43"] = 1.8;
        p["c_14"] = 2.0;
        p["e_24"] = 2.0;
        return p;
    }
    if (name == "dc_virtual_fold") {  // beta34 > 0 at the omega34 crossing in c_43
        ParamSet p = all_ones(NetworkKind::DeltaClique);
        p["t_31"] = 0.7;
        p["t_13"] = 0.7;
        p["c_14"] = 4.0;
        return p;
    }
    if (name == "dc_no_fold") {  // omega34<0; C4 fas
        ParamSet p = all_ones(NetworkKind::DeltaClique);
        p["c_42"] = 2.0;
        p["c_43"] = 1.2;
        return p;
    }
    if (name == "tn_double_switch") {  // delta3,delta4>1, mu3<0, nu4>0, omega34<0
        ParamSet p = all_ones(NetworkKind::Tournament);
        p["c_42"] = 0.5;
        p["c_13"] = 2.2;
        p["c_14"] = 3.0;
        p["e_34"] = 0.75;
        return p;
    }
    throw std::invalid_argument("unknown regime: " + name);
}

}  // namespace testsupport
