/* Fused single-hidden-layer MLP forward pass and MSE.
 *
 * Genome layout (ni inputs, nh hidden, no outputs):
 *   W_ih[nh][ni] | b_h[nh] | W_ho[no][nh] | b_o[no] | W_io[no][ni] (cascade)
 *
 * Every reduction runs in a fixed order, so a genome's result does not depend
 * on how genomes are spread over threads.
 */
#ifndef PLATEFAULT_MLP_KERNEL_H
#define PLATEFAULT_MLP_KERNEL_H

#include <math.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
#include <string.h>

#define PF_BLOCK 64

/* exp(x) for x in [-708, 0]; Cody-Waite reduction + degree-13 polynomial.
 * Branch free so the caller's loop vectorizes. Relative error ~2e-16. */
static inline double pf_exp_neg(double x)
{
    const double log2e = 1.4426950408889634;
    const double ln2_hi = 6.93147180369123816490e-01;
    const double ln2_lo = 1.90821492927058770002e-10;
    const double magic = 6755399441055744.0; /* 1.5 * 2^52 */
    double t = x * log2e + magic;
    double n = t - magic;
    double r = (x - n * ln2_hi) - n * ln2_lo;
    double p = 1.0 / 6227020800.0;
    p = p * r + 1.0 / 479001600.0;
    p = p * r + 1.0 / 39916800.0;
    p = p * r + 1.0 / 3628800.0;
    p = p * r + 1.0 / 362880.0;
    p = p * r + 1.0 / 40320.0;
    p = p * r + 1.0 / 5040.0;
    p = p * r + 1.0 / 720.0;
    p = p * r + 1.0 / 120.0;
    p = p * r + 1.0 / 24.0;
    p = p * r + 1.0 / 6.0;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;
    int64_t tb, mb, sb;
    double s;
    memcpy(&tb, &t, sizeof tb);
    memcpy(&mb, &magic, sizeof mb);
    sb = (tb - mb + 1023) << 52;
    memcpy(&s, &sb, sizeof s);
    return p * s;
}

static inline void pf_logistic(double *z, ptrdiff_t n)
{
    for (ptrdiff_t k = 0; k < n; ++k) {
        double v = z[k];
        double a = -fabs(v);
        double e = pf_exp_neg(a > -708.0 ? a : -708.0);
        double inv = 1.0 / (1.0 + e);
        double pos = (double)(v >= 0.0);
        /* v >= 0: 1/(1+e^-v); v < 0: e^v/(1+e^v) */
        z[k] = inv * (pos + (1.0 - pos) * e);
    }
}

static inline double pf_dot(const double *a, const double *b, ptrdiff_t n)
{
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    ptrdiff_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i)
        s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

/* Forward pass over n samples. If out != NULL, raw outputs are written as
 * out[n][no]; if y != NULL, the mean squared error against y[n][no] is
 * returned. Returns -1.0 on allocation failure. */
static double pf_mlp_run(const double *X, const double *y, ptrdiff_t n,
                         ptrdiff_t ni, const double *p, ptrdiff_t nh,
                         ptrdiff_t no, int cascade, double *out)
{
    const double *w_ih = p;
    const double *b_h = p + nh * ni;
    const double *w_ho = b_h + nh;
    const double *b_o = w_ho + nh * no;
    const double *w_io = b_o + no;
    double *wt = (double *)malloc(sizeof(double) * (size_t)(ni * nh));
    double *hb = (double *)malloc(sizeof(double) * (size_t)(PF_BLOCK * nh));
    if (wt == NULL || hb == NULL) {
        free(wt);
        free(hb);
        return -1.0;
    }
    for (ptrdiff_t j = 0; j < nh; ++j)
        for (ptrdiff_t i = 0; i < ni; ++i)
            wt[i * nh + j] = w_ih[j * ni + i];

    double total = 0.0;
    for (ptrdiff_t s0 = 0; s0 < n; s0 += PF_BLOCK) {
        ptrdiff_t nb = n - s0 < PF_BLOCK ? n - s0 : PF_BLOCK;
        for (ptrdiff_t s = 0; s < nb; ++s) {
            const double *x = X + (s0 + s) * ni;
            double *h = hb + s * nh;
            memcpy(h, b_h, sizeof(double) * (size_t)nh);
            for (ptrdiff_t i = 0; i < ni; ++i) {
                const double xi = x[i];
                const double *w = wt + i * nh;
                for (ptrdiff_t j = 0; j < nh; ++j)
                    h[j] += xi * w[j];
            }
        }
        pf_logistic(hb, nb * nh);
        for (ptrdiff_t s = 0; s < nb; ++s) {
            const double *x = X + (s0 + s) * ni;
            const double *h = hb + s * nh;
            for (ptrdiff_t o = 0; o < no; ++o) {
                double v = pf_dot(w_ho + o * nh, h, nh) + b_o[o];
                if (cascade)
                    v += pf_dot(w_io + o * ni, x, ni);
                if (out != NULL)
                    out[(s0 + s) * no + o] = v;
                if (y != NULL) {
                    double e = y[(s0 + s) * no + o] - v;
                    total += e * e;
                }
            }
        }
    }
    free(wt);
    free(hb);
    return n > 0 ? total / (double)(n * no) : 0.0;
}

#endif
