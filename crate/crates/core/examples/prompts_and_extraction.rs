//! Renders the generation and solve prompts for one task and extracts the
//! final answer from a few completion styles.

use algoeval::oracle::verify;
use algoeval::prompting::{build_generation_prompt, build_solve_prompt, extract_final_answer};
use algoeval::{Payload, ProblemInstance, Split, TaskId};

fn main() {
    let spec = TaskId::FindTopK.spec();
    println!("--- generation prompt\n{}\n", build_generation_prompt(spec).text);
    let x = ProblemInstance::new(spec.id, Split::Ood, Payload::ListPlusK { list: vec![41, 7, 93, 18, 66], k: 2 });
    println!("--- solve prompt\n{}\n", build_solve_prompt(spec, &x).text);

    let completions = [
        "Sorting descending gives 93, 66, 41, 18, 7.\nThe answer is 66",
        "**The answer is 66.**",
        "The answer is 93... wait, k = 2.\nThe answer is 66",
        "I think it is 66.",
    ];
    for text in completions {
        let got = extract_final_answer(text, spec);
        let verdict = got.answer.as_ref().map(|a| verify(&x, a).outcome);
        println!("{:?} {:?} <- {:?}", got.status, verdict, text);
    }
}
