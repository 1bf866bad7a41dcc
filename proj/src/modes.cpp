#include "sbfem/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sbfem/errors.hpp"

namespace sbfem {

SideFaceBC sideface_bc_for(const PolytopalMesh& mesh, const DofMap& dofs, const EMatrices& E, int selement)
{
    SideFaceBC bc;
    for (int v : mesh.selements.at(selement).dirichlet_sideface_nodes) {
        int g = dofs.vertex_node(v);
        auto it = std::lower_bound(E.global_nodes.begin(), E.global_nodes.end(), g);
        if (it == E.global_nodes.end() || *it != g)
            throw ValidationError("S-element " + std::to_string(selement) + ": side-face node " + std::to_string(v) +
                                  " is not on its scaled boundary");
        bc.constrained.push_back(static_cast<int>(it - E.global_nodes.begin()));
    }
    return bc;
}

EMatrices apply_sideface_bc(const EMatrices& E, const SideFaceBC& bc)
{
    if (bc.constrained.empty())
        return E;
    const int N = E.size();
    std::vector<char> drop(N, 0);
    for (int c : bc.constrained) {
        if (c < 0 || c >= N)
            throw DomainError("side-face constraint on unknown local DOF " + std::to_string(c));
        if (!std::binary_search(E.rim.begin(), E.rim.end(), c))
            throw DomainError("local DOF " + std::to_string(c) + " is not on a side face of the scaled boundary");
        drop[c] = 1;
    }
    std::vector<int> keep, remap(N, -1);
    for (int i = 0; i < N; ++i)
        if (!drop[i]) {
            remap[i] = static_cast<int>(keep.size());
            keep.push_back(i);
        }
    if (keep.empty())
        throw DomainError("side-face constraints remove every trace DOF");
    const int n = static_cast<int>(keep.size());
    EMatrices R;
    R.dimension = E.dimension;
    R.closed = E.closed;
    auto restrict = [&](const Matrix& X) {
        Matrix Y(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                Y(a, b) = X(keep[a], keep[b]);
        return Y;
    };
    R.E11 = restrict(E.E11);
    R.E12 = restrict(E.E12);
    R.E21 = R.E12.transpose();
    R.E22 = restrict(E.E22);
    for (int i : keep)
        R.global_nodes.push_back(E.global_nodes[i]);
    for (int r : E.rim)
        if (remap[r] >= 0)
            R.rim.push_back(remap[r]);
    for (const auto& m : E.dof_map) {
        std::vector<int> mm;
        for (int l : m)
            mm.push_back(l < 0 ? -1 : remap[l]);
        R.dof_map.push_back(std::move(mm));
    }
    return R;
}

EulerSystem build_system(const EMatrices& E, int d)
{
    const int N = E.size();
    if (N == 0)
        throw DomainError("build_system: empty trace space");
    Eigen::LLT<Matrix> llt(E.E11);
    if (llt.info() != Eigen::Success)
        throw ConditioningError("build_system: E11 is not positive definite");
    Eigen::SelfAdjointEigenSolver<Matrix> es(E.E11, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-14 * hi))
        throw ConditioningError("build_system: E11 is numerically singular (cond " + std::to_string(hi / lo) + ")");
    Matrix Y = llt.solve(Matrix::Identity(N, N));
    Matrix X = llt.solve(E.E12);
    EulerSystem sys;
    sys.dimension = d;
    sys.M.resize(2 * N, 2 * N);
    sys.M.topLeftCorner(N, N) = -X;
    sys.M.topRightCorner(N, N) = Y;
    sys.M.bottomLeftCorner(N, N) = E.E22 - E.E21 * X;
    sys.M.bottomRightCorner(N, N) = E.E21 * Y + (2.0 - d) * Matrix::Identity(N, N);
    return sys;
}

double SbfemModes::min_positive_exponent() const
{
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
        if (!constant_index || i != *constant_index)
            m = std::min(m, exponents[i].real());
    return m;
}

namespace {

std::string name_of(const ModeOptions& o)
{
    return o.label.empty() ? std::string("S-element") : o.label;
}

void realify(SbfemModes& m)
{
    const int N = m.size();
    std::vector<bool> used(N, false);
    m.real_modes.clear();
    for (int i = 0; i < N; ++i) {
        if (used[i])
            continue;
        used[i] = true;
        if (m.exponents[i].imag() == 0.0) {
            m.real_modes.push_back({i, false});
            continue;
        }
        // partner: the conjugate exponent
        int partner = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < N; ++j)
            if (!used[j]) {
                double dist = std::abs(m.exponents[j] - std::conj(m.exponents[i]));
                if (dist < best) {
                    best = dist;
                    partner = j;
                }
            }
        if (partner < 0 || best > 1e-8 * (1.0 + std::abs(m.exponents[i])))
            throw DefectiveSpectrumError("complex mode without conjugate partner");
        used[partner] = true;
        int pos = m.exponents[i].imag() > 0 ? i : partner;
        m.real_modes.push_back({pos, false});
        m.real_modes.push_back({pos, true});
    }
    m.real_traces.resize(N, N);
    for (int r = 0; r < N; ++r) {
        const auto& rm = m.real_modes[r];
        if (rm.imaginary)
            m.real_traces.col(r) = m.A.col(rm.mode).imag();
        else
            m.real_traces.col(r) = m.A.col(rm.mode).real();
    }
}

}  // namespace

namespace {

// Orthonormal basis of the invariant subspace of M for eigenvalues with Re > threshold:
// complex Schur form reordered by adjacent Givens swaps, then the leading Schur vectors.
CMatrix positive_subspace(const Matrix& M, double threshold, int expected, const std::string& label)
{
    const Eigen::Index n = M.rows();
    Eigen::ComplexSchur<CMatrix> schur(M.cast<Complex>());
    if (schur.info() != Eigen::Success)
        throw DefectiveSpectrumError(label + ": Schur decomposition failed");
    CMatrix T = schur.matrixT();
    CMatrix Z = schur.matrixU();
    auto wanted = [&](Eigen::Index i) { return T(i, i).real() > threshold; };
    Eigen::Index front = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!wanted(i))
            continue;
        for (Eigen::Index k = i; k > front; --k) {
            // swap diagonal entries k-1 and k
            Complex t11 = T(k - 1, k - 1), t22 = T(k, k);
            Eigen::JacobiRotation<Complex> G;
            G.makeGivens(T(k - 1, k), t22 - t11);
            T.applyOnTheLeft(k - 1, k, G.adjoint());
            T.applyOnTheRight(k - 1, k, G);
            Z.applyOnTheRight(k - 1, k, G);
            T(k - 1, k - 1) = t22;
            T(k, k) = t11;
            T(k, k - 1) = 0.0;
        }
        ++front;
    }
    if (front != expected)
        throw DefectiveSpectrumError(label + ": Schur ordering selected " + std::to_string(front) + " of " +
                                     std::to_string(expected) + " exponents");
    return Z.leftCols(front);
}

}  // namespace

SbfemModes select_modes(const EulerSystem& sys, const EMatrices& E, const ModeOptions& opt)
{
    const int N = sys.size();
    const int d = sys.dimension;
    Eigen::EigenSolver<Matrix> es(sys.M, true);
    if (es.info() != Eigen::Success)
        throw DefectiveSpectrumError(name_of(opt) + ": eigen-decomposition failed");
    const CVector& lam = es.eigenvalues();
    CMatrix V = es.eigenvectors();
    const double radius = lam.cwiseAbs().maxCoeff();
    const double eps = opt.zero_tol * std::max(radius, 1.0);
    const double mnorm = sys.M.norm();

    SbfemModes m;
    m.dimension = d;
    m.spectrum = lam;
    m.selected.assign(lam.size(), false);
    m.dof_map = E.dof_map;
    std::vector<int> picked;
    for (int i = 0; i < lam.size(); ++i)
        if (lam[i].real() > eps) {
            picked.push_back(i);
            m.selected[i] = true;
        }
    std::sort(picked.begin(), picked.end(), [&](int a, int b) {
        if (lam[a].real() != lam[b].real())
            return lam[a].real() < lam[b].real();
        return lam[a].imag() < lam[b].imag();
    });
    // the constant state (1, 0) spans a Jordan block at zero, whose computed pair
    // splits to +-O(sqrt(eps ||M||)); its positive half is not a mode
    Vector z = Vector::Zero(2 * N);
    z.head(N).setOnes();
    const bool constant_state = (sys.M * z).norm() / (mnorm * std::sqrt(static_cast<double>(N))) <= 1e-8;
    if (static_cast<int>(picked.size()) == N && constant_state &&
        std::abs(lam[picked.front()]) < std::sqrt(opt.zero_tol) * std::max(radius, 1.0)) {
        m.selected[picked.front()] = false;
        picked.erase(picked.begin());
    }
    const int count = static_cast<int>(picked.size());
    bool add_constant = false;
    if (count == N - 1) {
        // the zero cluster must contain the constant state (1, 0)
        if (!constant_state)
            throw DefectiveSpectrumError(name_of(opt) + ": zero exponent without a constant mode");
        add_constant = true;
        // mark the near-zero eigenvalue whose eigenvector is closest to (1, 0)
        int best = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < lam.size(); ++i) {
            if (m.selected[i] || std::abs(lam[i]) > std::sqrt(eps))
                continue;
            double ratio = V.col(i).tail(N).norm() / std::max(V.col(i).head(N).norm(), 1e-300);
            if (ratio < best_ratio) {
                best_ratio = ratio;
                best = i;
            }
        }
        if (best >= 0)
            m.selected[best] = true;
    } else if (count != N) {
        std::ostringstream os;
        os << name_of(opt) << ": defective spectrum, " << count << " exponents with positive real part for " << N
           << " trace DOFs";
        throw DefectiveSpectrumError(os.str());
    }

    const int total = count + (add_constant ? 1 : 0);
    m.exponents.resize(total);
    m.A.resize(N, total);
    m.P.resize(N, total);
    int col = 0;
    if (add_constant) {
        m.constant_index = 0;
        m.exponents[0] = 0.0;
        m.A.col(0).setOnes();
        m.P.col(0).setZero();
        col = 1;
    }
    // near-real exponents are snapped to the real axis
    std::vector<Complex> lp;
    for (int i : picked) {
        Complex l = lam[i];
        if (std::abs(l.imag()) <= 1e-9 * std::max(1.0, std::abs(l)))
            l = l.real();
        lp.push_back(l);
    }
    // repeated exponents: the eigensolver may return a degenerate basis, so the
    // eigenspace is recomputed as the null space of M - lambda I
    for (std::size_t a = 0; a < picked.size();) {
        std::size_t b = a + 1;
        while (b < picked.size() && std::abs(lp[b] - lp[a]) <= 1e-6 * std::max(1.0, std::abs(lp[a])))
            ++b;
        const int mult = static_cast<int>(b - a);
        Complex mean = 0.0;
        for (std::size_t i = a; i < b; ++i)
            mean += lp[i];
        mean /= static_cast<double>(mult);
        if (mean.imag() == 0.0 || mult == 1) {
            for (std::size_t i = a; i < b; ++i)
                lp[i] = lp[i].imag() == 0.0 ? Complex(mean.real()) : lp[i];
        }
        CMatrix basis(2 * N, mult);
        if (mult == 1) {
            basis.col(0) = V.col(picked[a]);
        } else if (mean.imag() == 0.0) {
            Matrix shifted = sys.M - mean.real() * Matrix::Identity(2 * N, 2 * N);
            Eigen::BDCSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
            basis = svd.matrixV().rightCols(mult).cast<Complex>();
        } else {
            CMatrix shifted = sys.M.cast<Complex>() - mean * CMatrix::Identity(2 * N, 2 * N);
            Eigen::BDCSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
            basis = svd.matrixV().rightCols(mult);
        }
        for (int j = 0; j < mult; ++j) {
            const Complex l = mult == 1 ? lp[a] : mean;
            CVector v = basis.col(j);
            double res = (sys.M.cast<Complex>() * v - l * v).norm() / (mnorm * v.norm());
            if (res > opt.residual_tol)
                throw DefectiveSpectrumError(name_of(opt) + ": inaccurate eigenpair (residual " +
                                             std::to_string(res) + ")");
            CVector av = v.head(N), pv = v.tail(N);
            // unit trace norm, largest entry real positive
            Eigen::Index imax = 0;
            av.cwiseAbs().maxCoeff(&imax);
            Complex phase = std::abs(av[imax]) / av[imax];
            double nrm = av.norm();
            av = av * phase / nrm;
            pv = pv * phase / nrm;
            if (l.imag() == 0.0) {
                av = av.real().cast<Complex>();
                pv = pv.real().cast<Complex>();
            }
            m.exponents[col] = l;
            m.A.col(col) = av;
            m.P.col(col) = pv;
            ++col;
        }
        a = b;
    }
    Eigen::BDCSVD<CMatrix> svd(m.A);
    const auto& sv = svd.singularValues();
    m.condition_A = sv[0] / sv[sv.size() - 1];
    if (!(m.condition_A < opt.condition_cap))
        throw DefectiveSpectrumError(name_of(opt) + ": mode matrix A is ill-conditioned (cond " +
                                     std::to_string(m.condition_A) + ")");
    realify(m);
    // cut halfway to the smallest selected exponent; the zero cluster is a Jordan
    // block whose Schur values are perturbed by O(sqrt(eps))
    double cut = eps;
    if (count > 0)
        cut = std::max(eps, 0.5 * lp.front().real());
    CMatrix X = positive_subspace(sys.M, cut, count, name_of(opt));
    if (add_constant) {
        CMatrix Y(2 * N, N);
        Y.leftCols(count) = X;
        Y.col(count).setZero();
        Y.col(count).head(N).setOnes();
        Eigen::HouseholderQR<CMatrix> qr(Y);
        X = qr.householderQ() * CMatrix::Identity(2 * N, N);
    }
    m.subspace = X;
    return m;
}

SbfemModes compute_modes(const EMatrices& E, const ModeOptions& options)
{
    return select_modes(build_system(E, E.dimension), E, options);
}

ModeShapes shape_eval(const SbfemModes& modes, int sector_index, const Sector& sector, const TraceBasis& basis,
                      double xi, const Point& eta)
{
    if (!(xi > 0.0 && xi <= 1.0 + 1e-14))
        throw DomainError("shape_eval: xi must lie in (0,1]");
    const auto& map = modes.dof_map.at(sector_index);
    if (static_cast<int>(map.size()) != basis.cardinality())
        throw DomainError("shape_eval: basis does not match the sector's DOF map");
    BVectors B = sector_B(sector, basis, eta);
    ShapeValues sv = shape_values(basis, eta);
    const int d = sector.dimension();
    const int N = modes.size();
    const int n = basis.cardinality();
    ModeShapes out;
    out.values.resize(N);
    out.gradients.resize(d, N);
    const double lx = std::log(xi);
    for (int r = 0; r < N; ++r) {
        const auto& rm = modes.real_modes[r];
        const Complex lam = modes.exponents[rm.mode];
        Complex val = 0.0;
        Eigen::Vector3cd g1 = Eigen::Vector3cd::Zero(), g2 = Eigen::Vector3cd::Zero();
        for (int l = 0; l < n; ++l) {
            if (map[l] < 0)
                continue;
            Complex a = modes.A(map[l], rm.mode);
            val += a * sv.values[l];
            for (int c = 0; c < d; ++c) {
                g1[c] += a * B.B1(c, l);
                g2[c] += a * B.B2(c, l);
            }
        }
        Complex pw = std::exp(lam * lx);        // xi^lambda
        Complex pw1 = std::exp((lam - 1.0) * lx);  // xi^(lambda-1)
        Complex v = pw * val;
        out.values[r] = rm.imaginary ? v.imag() : v.real();
        for (int c = 0; c < d; ++c) {
            Complex g = pw1 * (lam * g1[c] + g2[c]);
            out.gradients(c, r) = rm.imaginary ? g.imag() : g.real();
        }
    }
    return out;
}

SElementStiffness element_stiffness(const SbfemModes& modes, const ModeOptions& opt)
{
    if (!(modes.condition_A < opt.condition_cap))
        throw ConditioningError(name_of(opt) + ": cond(A) exceeds the cap");
    const int N = modes.size();
    if (modes.subspace.rows() != 2 * N || modes.subspace.cols() != N)
        throw DomainError(name_of(opt) + ": missing invariant subspace");
    // K = X2 X1^{-1}, the same graph as P A^{-1} on a well-conditioned basis
    CMatrix X1 = modes.subspace.topRows(N), X2 = modes.subspace.bottomRows(N);
    Eigen::PartialPivLU<CMatrix> lu1(X1.transpose());
    CMatrix KC = lu1.solve(X2.transpose()).transpose();
    Matrix K = KC.real();
    if (!K.allFinite())
        throw ConditioningError(name_of(opt) + ": singular subspace basis");
    // eigenvector route, kept as a diagnostic
    Eigen::PartialPivLU<CMatrix> lu(modes.A.transpose());
    CMatrix KT = lu.solve(modes.P.transpose());
    SElementStiffness out;
    double nk = std::max(K.norm(), 1e-300);
    out.imag_residue = KC.imag().norm() / nk;
    out.mode_deviation = (KT.transpose().real() - K).norm() / nk;
    out.asymmetry = (K - K.transpose()).norm() / nk;
    out.K = 0.5 * (K + K.transpose());
    return out;
}

namespace {

Complex gram_entry(const EMatrices& E, int d, Complex la, const CVector& a, Complex lb, const CVector& b)
{
    Complex num = la * lb * (a.transpose() * E.E11 * b)(0, 0) + la * (a.transpose() * E.E12 * b)(0, 0) +
          lb * (a.transpose() * E.E21 * b)(0, 0) + (a.transpose() * E.E22 * b)(0, 0);
    return num / (la + lb + static_cast<double>(d - 2));
}

}  // namespace

CMatrix mode_gram(const SbfemModes& modes, const EMatrices& E)
{
    const int N = modes.size();
    const int d = modes.dimension;
    CMatrix G = CMatrix::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        if (modes.constant_index && i == *modes.constant_index)
            continue;
        for (int j = 0; j < N; ++j) {
            if (modes.constant_index && j == *modes.constant_index)
                continue;
            G(i, j) = gram_entry(E, d, modes.exponents[i], modes.A.col(i), modes.exponents[j], modes.A.col(j));
        }
    }
    return G;
}

Matrix gram_stiffness(const SbfemModes& modes, const EMatrices& E)
{
    CMatrix G = mode_gram(modes, E);
    Eigen::PartialPivLU<CMatrix> lu(modes.A);
    CMatrix Ainv = lu.inverse();
    return (Ainv.transpose() * G * Ainv).real();
}

double Polynomial::operator()(double x) const
{
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        v = v * x + *it;
    return v;
}

namespace {

// int_0^1 xi^{shift} p(xi) dxi for a polynomial p (ascending coefficients).
Complex moment(const std::vector<double>& p, Complex shift)
{
    Complex s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] == 0.0)
            continue;
        Complex e = shift + static_cast<double>(j) + 1.0;
        if (e.real() <= 0.0)
            throw DomainError("orthogonality test function is not in H1");
        s += p[j] / e;
    }
    return s;
}

std::vector<double> derivative(const std::vector<double>& p)
{
    std::vector<double> q;
    for (std::size_t j = 1; j < p.size(); ++j)
        q.push_back(static_cast<double>(j) * p[j]);
    if (q.empty())
        q.push_back(0.0);
    return q;
}

std::vector<double> product(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

double orthogonality_residual(const SbfemModes& modes, const EMatrices& E, const Polynomial& sigma,
                              const std::vector<Vector>& test_traces)
{
    const int d = modes.dimension;
    const std::vector<double>& s = sigma.coeffs;
    const std::vector<double> ds = derivative(s);
    double worst = 0.0;
    for (const Vector& mu : test_traces) {
        // |psi|^2
        const double q11 = mu.dot(E.E11 * mu), q12 = mu.dot(E.E12 * mu), q22 = mu.dot(E.E22 * mu);
        const double qscale = std::abs(q11) + std::abs(q12) + std::abs(q22);
        double psi2 = q11 * moment(product(ds, ds), d - 1.0).real() + 2.0 * q12 * moment(product(ds, s), d - 2.0).real();
        if (std::abs(q22) > 1e-13 * qscale)
            psi2 += q22 * moment(product(s, s), d - 3.0).real();
        if (!(psi2 > 0.0))
            continue;
        const double psi_norm = std::sqrt(psi2);
        for (const auto& rm : modes.real_modes) {
            const int i = rm.mode;
            if (modes.constant_index && i == *modes.constant_index)
                continue;
            const Complex lam = modes.exponents[i];
            const CVector a = modes.A.col(i);
            const Complex c11 = (a.transpose() * E.E11 * mu)(0, 0);
            const Complex c12 = (a.transpose() * E.E12 * mu)(0, 0);
            const Complex c21 = (a.transpose() * E.E21 * mu)(0, 0);
            const Complex c22 = (a.transpose() * E.E22 * mu)(0, 0);
            // rho = xi^lambda, psi = sigma mu
            Complex form = c11 * lam * moment(ds, lam + (d - 2.0)) + c12 * lam * moment(s, lam + (d - 3.0)) +
                           c21 * moment(ds, lam + (d - 2.0)) + c22 * moment(s, lam + (d - 3.0));
            // energy of the realified function
            Complex g_same = gram_entry(E, d, lam, a, lam, a);
            Complex g_conj = gram_entry(E, d, lam, a, std::conj(lam), a.conjugate());
            double phi2;
            double value;
            if (lam.imag() == 0.0) {
                phi2 = g_same.real();
                value = form.real();
            } else if (!rm.imaginary) {
                phi2 = 0.5 * (g_same.real() + g_conj.real());
                value = form.real();
            } else {
                phi2 = 0.5 * (g_conj.real() - g_same.real());
                value = form.imag();
            }
            if (!(phi2 > 0.0))
                throw ConditioningError("orthogonality_residual: non-positive mode energy");
            worst = std::max(worst, std::abs(value) / (std::sqrt(phi2) * psi_norm));
        }
    }
    return worst;
}

double ode_residual(const SbfemModes& modes, const EMatrices& E, int i, double xi)
{
    const int d = modes.dimension;
    const Complex lam = modes.exponents[i];
    const CVector a = modes.A.col(i);
    const double lx = std::log(xi);
    CVector phi = std::exp(lam * lx) * a;
    CVector dphi = lam * std::exp((lam - 1.0) * lx) * a;
    CVector ddphi = lam * (lam - 1.0) * std::exp((lam - 2.0) * lx) * a;
    const Matrix C1 = (d - 1.0) * E.E11 - E.E21 + E.E12;
    const Matrix C0 = (d - 2.0) * E.E12 - E.E22;
    CVector r = std::pow(xi, d - 1) * (E.E11 * ddphi) + std::pow(xi, d - 2) * (C1 * dphi) + std::pow(xi, d - 3) * (C0 * phi);
    double scale = std::pow(xi, d - 1) * E.E11.norm() * ddphi.norm() + std::pow(xi, d - 2) * C1.norm() * dphi.norm() +
                   std::pow(xi, d - 3) * C0.norm() * phi.norm();
    if (scale == 0.0)
        return 0.0;
    return r.norm() / scale;
}

CVector complex_weights(const SbfemModes& modes, const Vector& c)
{
    CVector beta = CVector::Zero(modes.size());
    for (int r = 0; r < static_cast<int>(modes.real_modes.size()); ++r) {
        const auto& rm = modes.real_modes[r];
        // Re(z) c_re + Im(z) c_im = Re(z (c_re - i c_im))
        if (rm.imaginary)
            beta[rm.mode] += Complex(0.0, -c[r]);
        else
            beta[rm.mode] += c[r];
    }
    return beta;
}

}  // namespace sbfem
