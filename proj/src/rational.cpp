#include "ifstype/rational.hpp"

#include "ifstype/errors.hpp"

namespace ifstype {

Rat rat_parse(const std::string& text) {
    if (text.empty()) fail("BadRational", "empty rational literal");
    for (char c : text) {
        if (!(c == '/' || c == '-' || c == '+' || (c >= '0' && c <= '9')))
            fail("BadRational", "malformed rational literal '" + text + "'");
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        fail("BadRational", "malformed rational literal '" + text + "'");
    if (q.get_den() == 0)
        fail("BadRational", "zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::size_t rat_hash(const Rat& q) {
    // Residues modulo two large primes are enough to discriminate the small
    // rationals that occur as net interval data.
    const unsigned long m1 = 0xffffffffffc5ULL; // 2^48 - 59, prime
    std::size_t h = mpz_fdiv_ui(q.get_num().get_mpz_t(), m1);
    return hash_mix(h, mpz_fdiv_ui(q.get_den().get_mpz_t(), m1));
}

std::size_t rat_vec_hash(const std::vector<Rat>& v) {
    std::size_t h = v.size();
    for (const Rat& q : v) h = hash_mix(h, rat_hash(q));
    return h;
}

} // namespace ifstype
