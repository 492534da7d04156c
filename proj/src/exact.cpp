#include <qhd/errors.hpp>
#include <qhd/exact.hpp>

#include <stdexcept>

namespace qhd {

auto multiply(const Matrix<Integer> & a, const Matrix<Integer> & b) -> Matrix<Integer>
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix shapes do not match");
    Matrix<Integer> out(a.rows(), b.cols(), Integer(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

auto to_string(const Rational & q) -> std::string
{
    Rational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

auto to_string(const Integer & z) -> std::string { return z.get_str(); }

auto parse_rational(std::string_view text) -> Rational
{
    std::string s(text);
    if (s.empty())
        throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    auto valid_int = [](const std::string & t) {
        if (t.empty())
            return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size())
            return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9')
                return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(s))
            throw std::invalid_argument("not a rational: " + s);
        return Rational(Integer(s[0] == '+' ? s.substr(1) : s));
    }
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("not a rational: " + s);
    Integer d(den);
    if (d == 0)
        throw std::invalid_argument("zero denominator: " + s);
    Rational q(Integer(num[0] == '+' ? num.substr(1) : num), d);
    q.canonicalize();
    return q;
}

auto mod_one(const Rational & q) -> Rational
{
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    Rational r = q - Rational(fl);
    r.canonicalize();
    return r;
}

auto is_perfect_square(const Integer & z) -> bool { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0; }

auto to_long(const Integer & z) -> long long
{
    if (!z.fits_slong_p())
        throw LimitExceededError("integer does not fit in 64 bits: " + z.get_str());
    return z.get_si();
}

auto dot(std::span<const Rational> a, std::span<const Rational> b) -> Rational
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace qhd
