pub mod primal;
