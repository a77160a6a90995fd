#include "mfdp/mechlab.hpp"

#include <cmath>
#include <sstream>

#include "mfdp/errors.hpp"
#include "mfdp/io.hpp"
#include "mfdp/rng.hpp"

namespace mfdp {

double loss(const Matrix& b, const Matrix& c, const ParticipationSchema& schema,
            SensMethod method) {
    if (b.cols() != c.rows())
        throw ContractViolation("loss: B*C is not well-defined");
    double sens = 0.0;
    switch (method) {
        case SensMethod::brute: sens = sens_brute(c, schema); break;
        case SensMethod::nonneg: sens = sens_nonneg_fastpath(c, schema); break;
        case SensMethod::upper: sens = sens_upper(c, schema); break;
    }
    return sens * sens * b.squaredNorm();
}

Vector variance_profile(const Matrix& b, double sens) {
    return sens * sens * b.rowwise().squaredNorm();
}

Factorization normalize(const Factorization& f) {
    if (!(f.sens > 0.0))
        throw ContractViolation("normalize: sensitivity must be positive");
    Factorization out = f;
    out.B = f.B * f.sens;
    out.C = f.C / f.sens;
    out.sens = 1.0;
    return out;
}

Matrix sample_noise(const Matrix& b, int d, double sigma, std::uint64_t seed) {
    if (d < 1) throw ContractViolation("sample_noise: d must be >= 1");
    if (sigma < 0.0) throw ContractViolation("sample_noise: sigma must be >= 0");
    if (sigma == 0.0) return Matrix::Zero(b.rows(), d);
    Matrix z(b.cols(), d);
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j)
            z(i, j) = sigma * rng::keyed_gaussian(seed, static_cast<std::uint64_t>(i),
                                                  static_cast<std::uint64_t>(j));
    return b * z;
}

double zcdp(double sens, double sigma) {
    if (sigma <= 0.0) throw ContractViolation("zcdp: sigma must be > 0");
    return sens * sens / (2.0 * sigma * sigma);
}

double zcdp_to_epsilon(double rho, double delta) {
    if (rho <= 0.0) throw ContractViolation("zcdp_to_epsilon: rho must be > 0");
    if (delta <= 0.0 || delta >= 1.0)
        throw ContractViolation("zcdp_to_epsilon: delta must be in (0, 1)");
    return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

std::string report_csv_header() {
    return "mechanism,n,k,b,stamps,decoder,sens,sens_method,loss,root_loss";
}

std::string report_csv_row(const MechanismReport& r) {
    std::ostringstream out;
    out << r.mechanism_name << "," << r.n << "," << r.k << "," << r.b << ","
        << r.stamps << "," << r.decoder << "," << io::format_double(r.sens) << ","
        << to_string(r.sens_method) << "," << io::format_double(r.loss) << ","
        << io::format_double(r.root_loss);
    return out.str();
}

}  // namespace mfdp
