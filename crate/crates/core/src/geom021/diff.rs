// Central differences with one Richardson step (h, h/2): O(h⁴) truncation.

use crate::Result;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Jet<const N: usize> {
    pub value: [f64; N],
    pub du: [f64; N],
    pub dv: [f64; N],
    pub duu: [f64; N],
    pub duv: [f64; N],
    pub dvv: [f64; N],
}

struct Stencil<const N: usize> {
    c: [f64; N],
    e: [f64; N],
    w: [f64; N],
    n: [f64; N],
    s: [f64; N],
    ne: [f64; N],
    nw: [f64; N],
    se: [f64; N],
    sw: [f64; N],
}

fn richardson<const N: usize>(coarse: [f64; N], fine: [f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
    }
    out
}

fn combine<const N: usize>(f: impl Fn(usize) -> f64) -> [f64; N] {
    let mut out = [0.0; N];
    for (k, o) in out.iter_mut().enumerate() {
        *o = f(k);
    }
    out
}

impl<const N: usize> Stencil<N> {
    fn sample<F>(f: &F, u: f64, v: f64, h: f64, c: [f64; N], mixed: bool) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<[f64; N]>,
    {
        let z = [0.0; N];
        let (ne, nw, se, sw) = if mixed {
            (f(u + h, v + h)?, f(u - h, v + h)?, f(u + h, v - h)?, f(u - h, v - h)?)
        } else {
            (z, z, z, z)
        };
        Ok(Stencil { c, e: f(u + h, v)?, w: f(u - h, v)?, n: f(u, v + h)?, s: f(u, v - h)?, ne, nw, se, sw })
    }

    fn du(&self, h: f64) -> [f64; N] {
        combine(|k| (self.e[k] - self.w[k]) / (2.0 * h))
    }

    fn dv(&self, h: f64) -> [f64; N] {
        combine(|k| (self.n[k] - self.s[k]) / (2.0 * h))
    }

    fn duu(&self, h: f64) -> [f64; N] {
        combine(|k| (self.e[k] - 2.0 * self.c[k] + self.w[k]) / (h * h))
    }

    fn dvv(&self, h: f64) -> [f64; N] {
        combine(|k| (self.n[k] - 2.0 * self.c[k] + self.s[k]) / (h * h))
    }

    fn duv(&self, h: f64) -> [f64; N] {
        combine(|k| (self.ne[k] - self.nw[k] - self.se[k] + self.sw[k]) / (4.0 * h * h))
    }
}

/// Value with first and second partials of a vector field.
pub(crate) fn jet<const N: usize, F>(f: F, u: f64, v: f64, step: f64) -> Result<Jet<N>>
where
    F: Fn(f64, f64) -> Result<[f64; N]>,
{
    let c = f(u, v)?;
    let coarse = Stencil::sample(&f, u, v, step, c, true)?;
    let fine = Stencil::sample(&f, u, v, 0.5 * step, c, true)?;
    let (h, g) = (step, 0.5 * step);
    Ok(Jet {
        value: c,
        du: richardson(coarse.du(h), fine.du(g)),
        dv: richardson(coarse.dv(h), fine.dv(g)),
        duu: richardson(coarse.duu(h), fine.duu(g)),
        duv: richardson(coarse.duv(h), fine.duv(g)),
        dvv: richardson(coarse.dvv(h), fine.dvv(g)),
    })
}

/// First partials only (8 evaluations instead of 17).
pub(crate) fn first_partials<const N: usize, F>(f: F, u: f64, v: f64, step: f64) -> Result<([f64; N], [f64; N])>
where
    F: Fn(f64, f64) -> Result<[f64; N]>,
{
    let z = [0.0; N];
    let coarse = Stencil::sample(&f, u, v, step, z, false)?;
    let fine = Stencil::sample(&f, u, v, 0.5 * step, z, false)?;
    Ok((
        richardson(coarse.du(step), fine.du(0.5 * step)),
        richardson(coarse.dv(step), fine.dv(0.5 * step)),
    ))
}
