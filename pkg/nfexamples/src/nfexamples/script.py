"""GP script generation.

The generated script is self-contained and speaks a line protocol on
stdout: every fact is a single line `NFEX <key> <fields...>`, everything
else (banners, warnings) is noise the parser skips.  The protocol is closed
by `NFEX done`, or by `NFEX abort <reason> <label>` when a precondition
fails.  Class-group work runs GRH-conditional unless `use_grh` is false, in
which case the script additionally certifies each class group.  Composita
whose potential degree exceeds `degree_guard` are skipped with an explicit
`guard_skip` record instead of being attempted.
"""

from nfexamples.examples import ExampleSpec, polynomial_to_gp

DEFAULT_DEGREE_GUARD = 96


def build_script(
    spec: ExampleSpec, use_grh: bool = True, degree_guard: int = DEFAULT_DEGREE_GUARD
) -> str:
    if degree_guard < 1:
        raise ValueError("degree guard must be positive")
    octic = polynomial_to_gp(spec.defining_octic)
    quartic = polynomial_to_gp(spec.defining_quartic)
    grh_flag = 1 if use_grh else 0
    certify = (
        ""
        if use_grh
        else """\
    cert = bnfcertify(bnf);
    print("NFEX certified ", label, " ", cert);
"""
    )
    return f"""\
\\\\ generated by nf-examples; protocol: NFEX <key> <fields...>
default(parisize, "1024M");

guard = {degree_guard};
p = {spec.p};
grh = {grh_flag};

\\\\ class number and ramification profile of one compositum field.
\\\\ Both the compositum and the cyclotomic field are Galois over the
\\\\ rationals, so relative ramification indices over the cyclotomic
\\\\ subfield are ratios of absolute ones, uniformly over each rational
\\\\ prime; q is the residue size in the cyclotomic subfield and an entry
\\\\ is printed only where the relative index exceeds 1.
scorefield(label, pol, nfcyclo) = {{
    my(nfL, bnf, fa, l, dL, dE, erel, q, tame);
    nfL = nfinit(pol);
    bnf = bnfinit(pol, 1);
    print("NFEX class_number ", label, " ", bnf.no, " grh=", grh);
{certify}\
    fa = factor(abs(nfL.disc))[, 1];
    for (i = 1, #fa,
        l = fa[i];
        dL = idealprimedec(nfL, l)[1];
        dE = idealprimedec(nfcyclo, l)[1];
        erel = dL.e / dE.e;
        q = l^dE.f;
        tame = if (erel % l == 0, 0, 1);
        if (erel > 1,
            print("NFEX ram ", label, " ", l, " ", erel, " ", q, " ", tame));
    );
}}

\\\\ compositum with the cyclotomic field, behind the degree guard
compose(label, closure, cyclo, nfcyclo) = {{
    my(potential, comp);
    potential = poldegree(closure) * poldegree(cyclo);
    if (potential > guard,
        print("NFEX guard_skip ", label, " ", potential),
        comp = polcompositum(closure, cyclo)[1];
        print("NFEX compositum ", label, " ", poldegree(comp));
        scorefield(label, comp, nfcyclo);
    );
}}

octic = {octic};
quartic = {quartic};

print("NFEX begin p=", p, " grh=", grh, " guard=", guard);

iok = polisirreducible(octic);
print("NFEX irreducible octic ", iok);
if (!iok, print("NFEX abort reducible octic"); quit());
iok = polisirreducible(quartic);
print("NFEX irreducible quartic ", iok);
if (!iok, print("NFEX abort reducible quartic"); quit());

octcl = nfsplitting(octic);
print("NFEX closure octic ", poldegree(octcl));
qrtcl = nfsplitting(quartic);
print("NFEX closure quartic ", poldegree(qrtcl));
print("NFEX subfield quartic_in_octic ", if (nfisincl(qrtcl, octcl) == 0, 0, 1));

cyclo = polcyclo(p);
print("NFEX cyclo_degree ", poldegree(cyclo));
nfcyclo = nfinit(cyclo);

compose("quartic", qrtcl, cyclo, nfcyclo);
compose("octic", octcl, cyclo, nfcyclo);

print("NFEX done");
quit();
"""
