#include "conedelta/config.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "conedelta/errors.hpp"

namespace conedelta::report {

namespace {

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(15);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::string join_u(const std::vector<std::uint64_t>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

}  // namespace

void RunConfig::validate() {
    if (!(alpha > 0.0))
        throw InvalidInputError("config: alpha must be > 0 (attractive interaction); got " +
                                std::to_string(alpha));
    if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi))
        throw InvalidInputError(
            "config: theta must lie strictly between 0 and pi/2 radians (0 and 90 degrees); got " +
            std::to_string(theta) + " rad");
    if (rmax == 0.0) rmax = 24.0 / alpha;
    if (zext == 0.0) zext = rmax;
    if (h == 0.0) h = 0.25 / alpha;
    if (!(rmax > 0.0 && zext > 0.0 && h > 0.0))
        throw InvalidInputError("config: rmax, zext, h must be positive");
    if (h > rmax || h > zext)
        throw InvalidInputError("config: grid spacing h exceeds the box size");
    if (k < 1) throw InvalidInputError("config: k (eigenpair count) must be >= 1");
    if (k_max < 1) throw InvalidInputError("config: kmax (certificate depth) must be >= 1");
    if (!(margin > 0.0 && margin < 1.0))
        throw InvalidInputError("config: margin must lie in (0,1)");
    if (!(safety > 0.0 && safety < 1.0))
        throw InvalidInputError("config: safety must lie in (0,1)");
    if (b_exp && !(*b_exp > 0.5))
        throw InvalidInputError("config: b-exp must be > 1/2 (Hardy integral finite); got " +
                                std::to_string(*b_exp));
    for (double p : p_list)
        if (!std::isfinite(p)) throw InvalidInputError("config: non-finite wavenumber p");
    if (!vary.empty() && vary != "alpha" && vary != "theta" && vary != "box" && vary != "h")
        throw InvalidInputError("config: --vary must be one of alpha|theta|box|h");
    if (out.empty()) throw InvalidInputError("config: output name must not be empty");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> e;
    auto num = [](double v) {
        std::ostringstream os;
        os.precision(15);
        os << v;
        return os.str();
    };
    e.emplace_back("subcommand", subcommand);
    e.emplace_back("alpha", num(alpha));
    e.emplace_back("theta_rad", num(theta));
    e.emplace_back("rmax", num(rmax));
    e.emplace_back("zext", num(zext));
    e.emplace_back("h", num(h));
    e.emplace_back("k", std::to_string(k));
    if (shift) e.emplace_back("shift", num(*shift));
    if (!generatrix_path.empty()) e.emplace_back("generatrix", generatrix_path);
    if (deform_r0 > 0.0) e.emplace_back("deform_r0", num(deform_r0));
    if (b_exp) e.emplace_back("b_exp", num(*b_exp));
    e.emplace_back("margin", num(margin));
    e.emplace_back("safety", num(safety));
    e.emplace_back("kmax", std::to_string(k_max));
    if (!n_list.empty()) e.emplace_back("n_list", join_u(n_list));
    if (!p_list.empty()) e.emplace_back("p_list", join(p_list));
    e.emplace_back("detune", num(detune));
    if (!ey_lengths.empty()) e.emplace_back("ey_lengths", join(ey_lengths));
    if (!vary.empty()) {
        e.emplace_back("vary", vary);
        e.emplace_back("values", join(values));
    }
    e.emplace_back("out", out);
    e.emplace_back("seed", std::to_string(seed));
    return e;
}

}  // namespace conedelta::report
