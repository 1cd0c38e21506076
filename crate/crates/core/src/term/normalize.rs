use super::Term;

/// Beta-normal, eta-contracted form with every `!(^M)` reduced to `M`.
///
/// The input must be well typed; simply typed terms strongly normalize, so
/// this always terminates on such input.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Const { .. } | Term::Var(_) => t.clone(),
        Term::Lam(x, body) => {
            let body = normalize(body);
            if let Term::App(f, a) = &body {
                if matches!(&**a, Term::Var(v) if v.name == x.name) && !f.occurs_free(&x.name) {
                    return (**f).clone();
                }
            }
            Term::lam(x.clone(), body)
        }
        Term::App(f, a) => {
            let f = normalize(f);
            let a = normalize(a);
            match f {
                Term::Lam(x, body) => normalize(&body.subst(&x.name, &a)),
                f => Term::app(f, a),
            }
        }
        Term::Int(m) => Term::int(normalize(m)),
        Term::Ext(m) => match normalize(m) {
            Term::Int(inner) => *inner,
            m => Term::ext(m),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_term, parse_term_in, Name, Signature, SimpleType};

    fn sig() -> Signature {
        let e = SimpleType::E;
        let et = SimpleType::arrow(e.clone(), SimpleType::T);
        let mut s = Signature::new();
        s.declare("Bill", e.clone());
        s.declare("leave", et.clone());
        s.declare("f", et.clone());
        s.declare(
            "seek",
            SimpleType::arrow(
                e.clone(),
                SimpleType::arrow(
                    SimpleType::arrow(
                        SimpleType::S,
                        SimpleType::arrow(
                            SimpleType::arrow(SimpleType::S, et.clone()),
                            SimpleType::T,
                        ),
                    ),
                    SimpleType::T,
                ),
            ),
        );
        s
    }

    #[test]
    fn beta_step() {
        let s = sig();
        let t = parse_term("(\\x:e. leave(x))(Bill)", &s).unwrap();
        assert_eq!(normalize(&t), parse_term("leave(Bill)", &s).unwrap());
    }

    #[test]
    fn extension_of_intension_cancels() {
        let s = sig();
        let p_ty = SimpleType::arrow(SimpleType::E, SimpleType::T);
        let env: Vec<(Name, SimpleType)> = vec![("P".into(), p_ty)];
        let t = parse_term_in("!(^P)", &s, &env).unwrap();
        assert_eq!(normalize(&t), parse_term_in("P", &s, &env).unwrap());
    }

    #[test]
    fn eta_contracts_only_tail_variables() {
        let s = sig();
        assert_eq!(
            normalize(&parse_term("\\x:e. f(x)", &s).unwrap()),
            parse_term("f", &s).unwrap()
        );
        let q_ty = SimpleType::arrow(
            SimpleType::S,
            SimpleType::arrow(
                SimpleType::arrow(
                    SimpleType::S,
                    SimpleType::arrow(SimpleType::E, SimpleType::T),
                ),
                SimpleType::T,
            ),
        );
        let env: Vec<(Name, SimpleType)> = vec![("Y".into(), q_ty)];
        let kept = parse_term_in("\\x:e. seek(x, Y)", &s, &env).unwrap();
        assert_eq!(normalize(&kept), kept);
    }

    #[test]
    fn nested_redexes() {
        let s = sig();
        let t = parse_term("(\\g:e->t. \\y:e. g(y))(\\z:e. leave(z))(Bill)", &s).unwrap();
        assert_eq!(normalize(&t), parse_term("leave(Bill)", &s).unwrap());
    }
}
