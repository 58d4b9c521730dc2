#pragma once

// Dormand-Prince 8(5,3) explicit Runge-Kutta with 7th order dense output.
// Coefficients follow Hairer & Wanner's DOP853.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "sta/errors.hpp"

namespace sta {

struct Dop853Options {
  double rtol = 1e-12;
  double atol = 1e-14;
  double h_max = 0.0;    // 0 means the whole interval
  double h_initial = 0.0;  // 0 means automatic
  long max_steps = 10'000'000;
};

struct Dop853Stats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

namespace dop853_detail {
// nodes
inline constexpr double c2 = 0.526001519587677318785587544488e-01, c3 = 0.789002279381515978178381316732e-01,
                        c4 = 0.118350341907227396726757197510e+00, c5 = 0.281649658092772603273242802490e+00,
                        c6 = 0.333333333333333333333333333333e+00, c7 = 0.25e+00,
                        c8 = 0.307692307692307692307692307692e+00, c9 = 0.651282051282051282051282051282e+00,
                        c10 = 0.6e+00, c11 = 0.857142857142857142857142857142e+00, c14 = 0.1e+00, c15 = 0.2e+00,
                        c16 = 0.777777777777777777777777777778e+00;
// stage matrix
inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2, a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2, a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1, a53 = -8.84549479328286085344864962717e-1,
                        a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2, a64 = 1.70828608729473871279604482173e-1,
                        a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2, a74 = 1.70252211019544039314978060272e-1,
                        a75 = 6.02165389804559606850219397283e-2, a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2, a84 = 1.70383925712239993810214054705e-1,
                        a85 = 1.07262030446373284651809199168e-1, a86 = -1.53194377486244017527936158236e-2,
                        a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1, a94 = -3.36089262944694129406857109825e0,
                        a95 = -8.68219346841726006818189891453e-1, a96 = 2.75920996994467083049415600797e1,
                        a97 = 2.01540675504778934086186788979e1, a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1, a104 = -2.48811461997166764192642586468e0,
                        a105 = -5.90290826836842996371446475743e-1, a106 = 2.12300514481811942347288949897e1,
                        a107 = 1.52792336328824235832596922938e1, a108 = -3.32882109689848629194453265587e1,
                        a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1, a114 = 5.18637242884406370830023853209e0,
                        a115 = 1.09143734899672957818500254654e0, a116 = -8.14978701074692612513997267357e0,
                        a117 = -1.85200656599969598641566180701e1, a118 = 2.27394870993505042818970056734e1,
                        a119 = 2.49360555267965238987089396762e0, a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0, a124 = -1.05344954667372501984066689879e1,
                        a125 = -2.00087205822486249909675718444e0, a126 = -1.79589318631187989172765950534e1,
                        a127 = 2.79488845294199600508499808837e1, a128 = -2.85899827713502369474065508674e0,
                        a129 = -8.87285693353062954433549289258e0, a1210 = 1.23605671757943030647266201528e1,
                        a1211 = 6.43392746015763530355970484046e-1;
inline constexpr double a141 = 5.61675022830479523392909219681e-2, a147 = 2.53500210216624811088794765333e-1,
                        a148 = -2.46239037470802489917441475441e-1, a149 = -1.24191423263816360469010140626e-1,
                        a1410 = 1.5329179827876569731206322685e-1, a1411 = 8.20105229563468988491666602057e-3,
                        a1412 = 7.56789766054569976138603589584e-3, a1413 = -8.298e-3;
inline constexpr double a151 = 3.18346481635021405060768473261e-2, a156 = 2.83009096723667755288322961402e-2,
                        a157 = 5.35419883074385676223797384372e-2, a158 = -5.49237485713909884646569340306e-2,
                        a1511 = -1.08347328697249322858509316994e-4, a1512 = 3.82571090835658412954920192323e-4,
                        a1513 = -3.40465008687404560802977114492e-4, a1514 = 1.41312443674632500278074618366e-1;
inline constexpr double a161 = -4.28896301583791923408573538692e-1, a166 = -4.69762141536116384314449447206e0,
                        a167 = 7.68342119606259904184240953878e0, a168 = 4.06898981839711007970213554331e0,
                        a169 = 3.56727187455281109270669543021e-1, a1613 = -1.39902416515901462129418009734e-3,
                        a1614 = 2.9475147891527723389556272149e0, a1615 = -9.15095847217987001081870187138e0;
// 8th order weights
inline constexpr double b1 = 5.42937341165687622380535766363e-2, b6 = 4.45031289275240888144113950566e0,
                        b7 = 1.89151789931450038304281599044e0, b8 = -5.8012039600105847814672114227e0,
                        b9 = 3.1116436695781989440891606237e-1, b10 = -1.52160949662516078556178806805e-1,
                        b11 = 2.01365400804030348374776537501e-1, b12 = 4.47106157277725905176885569043e-2;
// 3rd and 5th order error estimators
inline constexpr double bhh1 = 0.244094488188976377952755905512e+00, bhh2 = 0.733846688281611857341361741547e+00,
                        bhh3 = 0.220588235294117647058823529412e-01;
inline constexpr double er1 = 0.1312004499419488073250102996e-01, er6 = -0.1225156446376204440720569753e+01,
                        er7 = -0.4957589496572501915214079952e+00, er8 = 0.1664377182454986536961530415e+01,
                        er9 = -0.3503288487499736816886487290e+00, er10 = 0.3341791187130174790297318841e+00,
                        er11 = 0.8192320648511571246570742613e-01, er12 = -0.2235530786388629525884427845e-01;
// dense output
inline constexpr double d41 = -0.84289382761090128651353491142e+01, d46 = 0.56671495351937776962531783590e+00,
                        d47 = -0.30689499459498916912797304727e+01, d48 = 0.23846676565120698287728149680e+01,
                        d49 = 0.21170345824450282767155149946e+01, d410 = -0.87139158377797299206789907490e+00,
                        d411 = 0.22404374302607882758541771650e+01, d412 = 0.63157877876946881815570249290e+00,
                        d413 = -0.88990336451333310820698117400e-01, d414 = 0.18148505520854727256656404962e+02,
                        d415 = -0.91946323924783554000451984436e+01, d416 = -0.44360363875948939664310572000e+01;
inline constexpr double d51 = 0.10427508642579134603413151009e+02, d56 = 0.24228349177525818288430175319e+03,
                        d57 = 0.16520045171727028198505394887e+03, d58 = -0.37454675472269020279518312152e+03,
                        d59 = -0.22113666853125306036270938578e+02, d510 = 0.77334326684722638389603898808e+01,
                        d511 = -0.30674084731089398182061213626e+02, d512 = -0.93321305264302278729567221706e+01,
                        d513 = 0.15697238121770843886131091075e+02, d514 = -0.31139403219565177677282850411e+02,
                        d515 = -0.93529243588444783865713862664e+01, d516 = 0.35816841486394083752465898540e+02;
inline constexpr double d61 = 0.19985053242002433820987653617e+02, d66 = -0.38703730874935176555105901742e+03,
                        d67 = -0.18917813819516756882830838328e+03, d68 = 0.52780815920542364900561016686e+03,
                        d69 = -0.11573902539959630126141871134e+02, d610 = 0.68812326946963000169666922661e+01,
                        d611 = -0.10006050966910838403183860980e+01, d612 = 0.77771377980534432092869265740e+00,
                        d613 = -0.27782057523535084065932004339e+01, d614 = -0.60196695231264120758267380846e+02,
                        d615 = 0.84320405506677161018159903784e+02, d616 = 0.11992291136182789328035130030e+02;
inline constexpr double d71 = -0.25693933462703749003312586129e+02, d76 = -0.15418974869023643374053993627e+03,
                        d77 = -0.23152937917604549567536039109e+03, d78 = 0.35763911791061412378285349910e+03,
                        d79 = 0.93405324183624310003907691704e+02, d710 = -0.37458323136451633156875139351e+02,
                        d711 = 0.10409964950896230045147246184e+03, d712 = 0.29840293426660503123344363579e+02,
                        d713 = -0.43533456590011143754432175058e+02, d714 = 0.96324553959188282948394950600e+02,
                        d715 = -0.39177261675615439165231486172e+02, d716 = -0.14972683625798562581422125276e+03;
}  // namespace dop853_detail

/// Interpolant over one accepted step [t0, t1].
template <std::size_t N>
class Dop853Dense {
 public:
  using State = std::array<double, N>;

  double t0() const { return t0_; }
  double t1() const { return t1_; }

  State operator()(double t) const {
    const double s = (t - t0_) / (t1_ - t0_);
    const double s1 = 1.0 - s;
    State y;
    for (std::size_t i = 0; i < N; ++i) {
      const double par = r_[4][i] + s * (r_[5][i] + s1 * (r_[6][i] + s * r_[7][i]));
      y[i] = r_[0][i] + s * (r_[1][i] + s1 * (r_[2][i] + s * (r_[3][i] + s1 * par)));
    }
    return y;
  }

 private:
  template <std::size_t>
  friend class Dop853;
  double t0_ = 0.0, t1_ = 0.0;
  std::array<State, 8> r_{};
};

/// Integrates y' = rhs(t, y) from t0 to t1. After every accepted step the
/// observer receives the step interpolant.
template <std::size_t N>
class Dop853 {
 public:
  using State = std::array<double, N>;

  explicit Dop853(Dop853Options opt = {}) : opt_(opt) {}

  const Dop853Stats& stats() const { return stats_; }

  template <class Rhs, class Observer>
  State integrate(Rhs&& rhs, double t0, State y, double t1, Observer&& observer) {
    using namespace dop853_detail;
    stats_ = {};
    if (t1 == t0) return y;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double h_max = opt_.h_max > 0.0 ? opt_.h_max : std::abs(t1 - t0);
    constexpr double eps = std::numeric_limits<double>::epsilon();

    auto f = [&](double t, const State& s) {
      ++stats_.evaluations;
      State d;
      rhs(t, s, d);
      return d;
    };

    double t = t0;
    State k1 = f(t, y);
    double h = opt_.h_initial > 0.0 ? std::min(opt_.h_initial, h_max) : initial_step(f, t, y, k1, dir, h_max);
    h *= dir;
    bool last_rejected = false;

    State k2, k3, k4, k5, k6, k7, k8, k9, k10, yw, ynew, k_new;
    for (;;) {
      if (stats_.accepted + stats_.rejected >= opt_.max_steps)
        throw IntegrationError("ODE step budget exhausted", t);
      if (0.1 * std::abs(h) <= std::abs(t) * eps || std::abs(h) < std::numeric_limits<double>::min())
        throw IntegrationError("ODE step size underflow", t);
      bool last = false;
      if ((t + 1.01 * h - t1) * dir > 0.0) {
        h = t1 - t;
        last = true;
      }

      for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * a21 * k1[i];
      k2 = f(t + c2 * h, yw);
      for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      k3 = f(t + c3 * h, yw);
      for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
      k4 = f(t + c4 * h, yw);
      for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = f(t + c5 * h, yw);
      for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
      k6 = f(t + c6 * h, yw);
      for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      k7 = f(t + c7 * h, yw);
      for (std::size_t i = 0; i < N; ++i)
        yw[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
      k8 = f(t + c8 * h, yw);
      for (std::size_t i = 0; i < N; ++i)
        yw[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i]);
      k9 = f(t + c9 * h, yw);
      for (std::size_t i = 0; i < N; ++i)
        yw[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
                            a108 * k8[i] + a109 * k9[i]);
      k10 = f(t + c10 * h, yw);
      for (std::size_t i = 0; i < N; ++i)
        yw[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
                            a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
      k2 = f(t + c11 * h, yw);
      const double t_ph = t + h;
      for (std::size_t i = 0; i < N; ++i)
        yw[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
                            a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k2[i]);
      k3 = f(t_ph, yw);
      for (std::size_t i = 0; i < N; ++i) {
        k4[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] + b11 * k2[i] +
                b12 * k3[i];
        k5[i] = y[i] + h * k4[i];
      }
      ynew = k5;

      double err = 0.0, err2 = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sk = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double e2 = k4[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k3[i];
        const double e = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
                         er11 * k2[i] + er12 * k3[i];
        err2 += (e2 / sk) * (e2 / sk);
        err += (e / sk) * (e / sk);
      }
      double deno = err + 0.01 * err2;
      if (deno <= 0.0) deno = 1.0;
      err = std::abs(h) * err * std::sqrt(1.0 / (static_cast<double>(N) * deno));

      const double fac11 = std::pow(err, 0.125);
      double fac = std::max(1.0 / 6.0, std::min(1.0 / 0.333, fac11 / 0.9));
      double h_new = h / fac;

      if (err <= 1.0) {
        ++stats_.accepted;
        k_new = f(t_ph, ynew);

        Dop853Dense<N> dense;
        dense.t0_ = t;
        dense.t1_ = t_ph;
        for (std::size_t i = 0; i < N; ++i) {
          const double ydiff = ynew[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          dense.r_[0][i] = y[i];
          dense.r_[1][i] = ydiff;
          dense.r_[2][i] = bspl;
          dense.r_[3][i] = ydiff - h * k_new[i] - bspl;
          dense.r_[4][i] = d41 * k1[i] + d46 * k6[i] + d47 * k7[i] + d48 * k8[i] + d49 * k9[i] + d410 * k10[i] +
                           d411 * k2[i] + d412 * k3[i];
          dense.r_[5][i] = d51 * k1[i] + d56 * k6[i] + d57 * k7[i] + d58 * k8[i] + d59 * k9[i] + d510 * k10[i] +
                           d511 * k2[i] + d512 * k3[i];
          dense.r_[6][i] = d61 * k1[i] + d66 * k6[i] + d67 * k7[i] + d68 * k8[i] + d69 * k9[i] + d610 * k10[i] +
                           d611 * k2[i] + d612 * k3[i];
          dense.r_[7][i] = d71 * k1[i] + d76 * k6[i] + d77 * k7[i] + d78 * k8[i] + d79 * k9[i] + d710 * k10[i] +
                           d711 * k2[i] + d712 * k3[i];
        }
        // three extra stages for the 7th order interpolant
        for (std::size_t i = 0; i < N; ++i)
          yw[i] = y[i] + h * (a141 * k1[i] + a147 * k7[i] + a148 * k8[i] + a149 * k9[i] + a1410 * k10[i] +
                              a1411 * k2[i] + a1412 * k3[i] + a1413 * k_new[i]);
        k10 = f(t + c14 * h, yw);
        for (std::size_t i = 0; i < N; ++i)
          yw[i] = y[i] + h * (a151 * k1[i] + a156 * k6[i] + a157 * k7[i] + a158 * k8[i] + a1511 * k2[i] +
                              a1512 * k3[i] + a1513 * k_new[i] + a1514 * k10[i]);
        k2 = f(t + c15 * h, yw);
        for (std::size_t i = 0; i < N; ++i)
          yw[i] = y[i] + h * (a161 * k1[i] + a166 * k6[i] + a167 * k7[i] + a168 * k8[i] + a169 * k9[i] +
                              a1613 * k_new[i] + a1614 * k10[i] + a1615 * k2[i]);
        k3 = f(t + c16 * h, yw);
        for (std::size_t i = 0; i < N; ++i) {
          dense.r_[4][i] = h * (dense.r_[4][i] + d413 * k_new[i] + d414 * k10[i] + d415 * k2[i] + d416 * k3[i]);
          dense.r_[5][i] = h * (dense.r_[5][i] + d513 * k_new[i] + d514 * k10[i] + d515 * k2[i] + d516 * k3[i]);
          dense.r_[6][i] = h * (dense.r_[6][i] + d613 * k_new[i] + d614 * k10[i] + d615 * k2[i] + d616 * k3[i]);
          dense.r_[7][i] = h * (dense.r_[7][i] + d713 * k_new[i] + d714 * k10[i] + d715 * k2[i] + d716 * k3[i]);
        }

        k1 = k_new;
        y = ynew;
        t = last ? t1 : t_ph;
        observer(static_cast<const Dop853Dense<N>&>(dense));
        if (last) return y;
        if (std::abs(h_new) > h_max) h_new = dir * h_max;
        if (last_rejected) h_new = dir * std::min(std::abs(h_new), std::abs(h));
        last_rejected = false;
      } else {
        ++stats_.rejected;
        h_new = h / std::min(1.0 / 0.333, fac11 / 0.9);
        last_rejected = true;
      }
      h = h_new;
    }
  }

  template <class Rhs>
  State integrate(Rhs&& rhs, double t0, State y, double t1) {
    return integrate(std::forward<Rhs>(rhs), t0, y, t1, [](const Dop853Dense<N>&) {});
  }

 private:
  template <class F>
  double initial_step(F& f, double t, const State& y, const State& k1, double dir, double h_max) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, h_max);
    State y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h * k1[i];
    const State k2 = f(t + dir * h, y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
    return std::min({100.0 * h, h1, h_max});
  }

  Dop853Options opt_;
  Dop853Stats stats_;
};

}  // namespace sta
