#include "tentkit/matrix_functions.hpp"

#include <cmath>

namespace tentkit {

namespace {

double norm1(const Mat& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); }

} // namespace

Mat expm(const Mat& Z)
{
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;
    const Eigen::Index N = Z.rows();
    const double nrm = norm1(Z);
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    const Mat A = Z * std::ldexp(1.0, -s);
    const Mat I = Mat::Identity(N, N);
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    Mat inner = b[13] * A6 + b[11] * A4 + b[9] * A2;
    Mat U = A6 * inner;
    U += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
    U = A * U;
    inner = b[12] * A6 + b[10] * A4 + b[8] * A2;
    Mat V = A6 * inner;
    V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    Mat R = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < s; ++k) R = R * R;
    return R;
}

PhiFunctions phi_functions(const Mat& Z)
{
    const Eigen::Index N = Z.rows();
    const Mat I = Mat::Identity(N, N);
    const double nrm = norm1(Z);
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    const Mat A = Z * std::ldexp(1.0, -s);

    // phi3(A) = sum_k A^k / (k+3)! by Horner; 0.5^18/21! < 1e-24
    constexpr int terms = 18;
    std::vector<double> coef(terms + 1);
    double fact = 6.0; // (k+3)! at k = 0
    for (int k = 0; k <= terms; ++k) {
        coef[k] = 1.0 / fact;
        fact *= (k + 4);
    }
    Mat p3 = coef[terms] * I;
    for (int k = terms - 1; k >= 0; --k) {
        p3 = A * p3;
        p3.diagonal().array() += coef[k];
    }
    Mat p2 = A * p3;
    p2.diagonal().array() += 0.5;
    Mat p1 = A * p2;
    p1.diagonal().array() += 1.0;
    Mat e = A * p1;
    e.diagonal().array() += 1.0;

    // phi_k(2A) = 2^-k (e^A phi_k(A) + sum_{j=1..k} phi_j(A) / (k-j)!)
    for (int k = 0; k < s; ++k) {
        Mat ep = e;
        ep.diagonal().array() += 1.0;
        Mat p3n = 0.125 * (p3 * ep + p2 + 0.5 * p1);
        Mat p2n = 0.25 * (p1 + p2 * ep);
        p1 = 0.5 * (p1 * ep);
        p2 = std::move(p2n);
        p3 = std::move(p3n);
        e = e * e;
    }
    return {std::move(e), std::move(p1), std::move(p2), std::move(p3)};
}

double phi1(double z)
{
    if (z == 0.0) return 1.0;
    return std::expm1(z) / z;
}

double phi2(double z)
{
    if (std::abs(z) < 0.5) {
        double term = 0.5, sum = 0.0;
        for (int k = 0; k < 25; ++k) {
            sum += term;
            term *= z / (k + 3);
        }
        return sum;
    }
    return (std::expm1(z) - z) / (z * z);
}

double phi3(double z)
{
    if (std::abs(z) < 0.5) {
        double term = 1.0 / 6.0, sum = 0.0;
        for (int k = 0; k < 25; ++k) {
            sum += term;
            term *= z / (k + 4);
        }
        return sum;
    }
    return (phi2(z) - 0.5) / z;
}

} // namespace tentkit
